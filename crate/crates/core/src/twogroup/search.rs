//! Depth-first search over finite assignments with constraint propagation by
//! firing each constraint as soon as its last variable is set.

use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u128 = 20_000_000;

/// Caps the number of search nodes visited.
#[derive(Clone, Debug)]
pub struct Budget {
    limit: u128,
    used: u128,
}

impl Budget {
    pub fn new(limit: u128) -> Self {
        Self { limit, used: 0 }
    }

    pub fn used(&self) -> u128 {
        self.used
    }

    pub fn limit(&self) -> u128 {
        self.limit
    }

    fn tick(&mut self, space: u128) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            return Err(Error::BudgetExceeded { needed: space.max(self.used), budget: self.limit });
        }
        Ok(())
    }
}

type Check<'a> = Box<dyn Fn(&[usize]) -> bool + 'a>;

pub struct Csp<'a> {
    domains: Vec<Vec<usize>>,
    constraints: Vec<(Vec<usize>, Check<'a>)>,
}

impl<'a> Csp<'a> {
    pub fn new(domains: Vec<Vec<usize>>) -> Self {
        Self { domains, constraints: Vec::new() }
    }

    /// `check` sees the full assignment vector; it runs once all of `vars` are set.
    pub fn constrain(&mut self, vars: Vec<usize>, check: impl Fn(&[usize]) -> bool + 'a) {
        self.constraints.push((vars, Box::new(check)));
    }

    /// Size of the unpruned search space, saturating.
    pub fn space(&self) -> u128 {
        self.domains.iter().fold(1u128, |acc, d| acc.saturating_mul(d.len() as u128))
    }

    /// Visits every satisfying assignment, in lexicographic order along `order`
    /// (values in domain order). `visit` returns `false` to stop.
    pub fn run(&self, order: &[usize], budget: &mut Budget, mut visit: impl FnMut(&[usize]) -> bool) -> Result<()> {
        assert_eq!(order.len(), self.domains.len(), "order must list every variable once");
        let mut pos = vec![0; order.len()];
        for (p, &v) in order.iter().enumerate() {
            pos[v] = p;
        }
        let mut fire: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
        let mut always = Vec::new();
        for (c, (vars, _)) in self.constraints.iter().enumerate() {
            match vars.iter().map(|&v| pos[v]).max() {
                Some(p) => fire[p].push(c),
                None => always.push(c),
            }
        }
        let mut assign = vec![usize::MAX; order.len()];
        if always.iter().any(|&c| !(self.constraints[c].1)(&assign)) {
            return Ok(());
        }
        let space = self.space();
        let mut cursor = vec![0usize; order.len()];
        let mut depth = 0usize;
        if order.is_empty() {
            visit(&assign);
            return Ok(());
        }
        loop {
            let var = order[depth];
            if cursor[depth] == self.domains[var].len() {
                cursor[depth] = 0;
                assign[var] = usize::MAX;
                if depth == 0 {
                    return Ok(());
                }
                depth -= 1;
                cursor[depth] += 1;
                continue;
            }
            budget.tick(space)?;
            assign[var] = self.domains[var][cursor[depth]];
            if fire[depth].iter().all(|&c| (self.constraints[c].1)(&assign)) {
                if depth + 1 == order.len() {
                    if !visit(&assign) {
                        return Ok(());
                    }
                    cursor[depth] += 1;
                } else {
                    depth += 1;
                }
            } else {
                cursor[depth] += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_in_order_with_pruning() {
        let mut csp = Csp::new(vec![vec![0, 1, 2]; 3]);
        csp.constrain(vec![0, 1], |a| a[0] < a[1]);
        csp.constrain(vec![1, 2], |a| a[1] < a[2]);
        let mut seen = Vec::new();
        csp.run(&[0, 1, 2], &mut Budget::new(100), |a| {
            seen.push(a.to_vec());
            true
        })
        .unwrap();
        assert_eq!(seen, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn budget_is_enforced() {
        let csp = Csp::new(vec![vec![0, 1]; 20]);
        let order: Vec<usize> = (0..20).collect();
        let err = csp.run(&order, &mut Budget::new(1000), |_| true).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { needed: 1 << 20, budget: 1000 });
    }
}
