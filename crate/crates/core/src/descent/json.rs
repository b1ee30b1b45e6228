//! Bundle files for chart descent data.

use serde::{Deserialize, Serialize};

use super::{ChartAlgebra, ChartMorphism, ChartStep, ChartUnit, DescentData};
use crate::error::{Error, Result};
use crate::homology::{CoverNerve, NerveJson, RCxValue};
use crate::microdiff::MicrodiffOperator;
use crate::symcore::{format_rational, parse_rational, GradedSymbol, SymbolJson};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartAlgebraJson {
    pub nvars: usize,
    pub window: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StepJson {
    SectorShift(String),
    Ad(SymbolJson),
}

/// `chain[0]` is applied last.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismEntryJson {
    pub edge: [usize; 2],
    pub chain: Vec<StepJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitEntryJson {
    pub simplex: [usize; 3],
    pub phase: [String; 2],
    pub op: SymbolJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleJson {
    pub nerve: NerveJson,
    pub algebra: ChartAlgebraJson,
    pub morphisms: Vec<MorphismEntryJson>,
    pub units: Vec<UnitEntryJson>,
}

fn op_from_json(alg: &ChartAlgebra, j: &SymbolJson) -> Result<MicrodiffOperator> {
    let op = MicrodiffOperator::from_symbol(GradedSymbol::try_from(j)?);
    if op.nvars() != alg.nvars() {
        return Err(Error::NvarsMismatch { left: op.nvars(), right: alg.nvars() });
    }
    Ok(op)
}

fn op_to_json(op: &MicrodiffOperator) -> SymbolJson {
    SymbolJson::from(op.symbol())
}

/// Places each entry at its simplex index; every simplex must appear exactly once.
fn place<T>(nerve: &CoverNerve, k: usize, entries: Vec<(Vec<usize>, T)>) -> Result<Vec<T>> {
    let mut slots: Vec<Option<T>> = (0..nerve.count(k)).map(|_| None).collect();
    for (s, v) in entries {
        let idx = nerve.index_of(&s).ok_or_else(|| Error::InvalidValue(format!("{s:?} is not a {k}-simplex of the nerve")))?;
        if slots[idx].replace(v).is_some() {
            return Err(Error::InvalidValue(format!("{s:?} is listed twice")));
        }
    }
    let missing: Vec<&Vec<usize>> = slots.iter().zip(nerve.simplices(k)).filter(|(v, _)| v.is_none()).map(|(_, s)| s).collect();
    if !missing.is_empty() {
        return Err(Error::IncompleteAssignment(format!("no entry for {missing:?}")));
    }
    Ok(slots.into_iter().map(|v| v.expect("checked")).collect())
}

impl BundleJson {
    pub fn to_descent(&self) -> Result<DescentData<ChartAlgebra>> {
        let nerve = CoverNerve::from_json(&self.nerve)?;
        let alg = ChartAlgebra::new(self.algebra.nvars, self.algebra.window)?;
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| {
                let steps = m
                    .chain
                    .iter()
                    .map(|s| match s {
                        StepJson::SectorShift(l) => Ok(ChartStep::SectorShift(parse_rational(l)?)),
                        StepJson::Ad(p) => Ok(ChartStep::AdConj(op_from_json(&alg, p)?)),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((m.edge.to_vec(), ChartMorphism { steps }))
            })
            .collect::<Result<Vec<_>>>()?;
        let units = self
            .units
            .iter()
            .map(|u| {
                let phase = RCxValue::new(parse_rational(&u.phase[0])?, parse_rational(&u.phase[1])?);
                Ok((u.simplex.to_vec(), ChartUnit::new(phase, op_from_json(&alg, &u.op)?)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let morphisms = place(&nerve, 1, morphisms)?;
        let units = place(&nerve, 2, units)?;
        DescentData::new(nerve, alg, morphisms, units)
    }

    pub fn from_descent(d: &DescentData<ChartAlgebra>) -> Self {
        let morphisms = d
            .nerve
            .simplices(1)
            .iter()
            .zip(&d.morphisms)
            .map(|(s, f)| MorphismEntryJson {
                edge: [s[0], s[1]],
                chain: f
                    .steps
                    .iter()
                    .map(|st| match st {
                        ChartStep::SectorShift(l) => StepJson::SectorShift(format_rational(l)),
                        ChartStep::AdConj(p) => StepJson::Ad(op_to_json(p)),
                    })
                    .collect(),
            })
            .collect();
        let units = d
            .nerve
            .simplices(2)
            .iter()
            .zip(&d.units)
            .map(|(s, u)| UnitEntryJson {
                simplex: [s[0], s[1], s[2]],
                phase: [format_rational(u.phase().t()), format_rational(u.phase().u())],
                op: op_to_json(u.op()),
            })
            .collect();
        BundleJson {
            nerve: d.nerve.to_json(),
            algebra: ChartAlgebraJson { nvars: d.algebra.nvars(), window: d.algebra.window() },
            morphisms,
            units,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descent::{normal_form, twist_by_lambda, verify_descent};
    use crate::homology::{models, CoeffValue, Cochain, CoefficientGroup};
    use crate::symcore::{parse_json, rat};

    #[test]
    fn bundle_round_trip() {
        let n = models::sphere();
        let c = Cochain::on_nerve(&n, 2, CoefficientGroup::QmodZ, |t| CoeffValue::Rat(if t == [0, 1, 3] { rat(1, 4) } else { rat(0, 1) })).unwrap();
        let d = twist_by_lambda(&n, &Cochain::zero(1, CoefficientGroup::QmodZ, 6), &c, &ChartAlgebra::new(1, 3).unwrap()).unwrap();
        let text = serde_json::to_string_pretty(&BundleJson::from_descent(&d)).unwrap();
        let back = parse_json::<BundleJson>(&text).unwrap().to_descent().unwrap();
        assert!(verify_descent(&back).unwrap().holds());
        assert_eq!(normal_form(&back).unwrap(), normal_form(&d).unwrap());
        assert_eq!(serde_json::to_string_pretty(&BundleJson::from_descent(&back)).unwrap(), text);
    }

    #[test]
    fn missing_entries_are_incomplete() {
        let n = models::circle();
        let d = twist_by_lambda(&n, &Cochain::zero(1, CoefficientGroup::QmodZ, 3), &Cochain::zero(2, CoefficientGroup::RCx, 0), &ChartAlgebra::new(1, 2).unwrap()).unwrap();
        let mut j = BundleJson::from_descent(&d);
        j.morphisms.pop();
        assert!(matches!(j.to_descent(), Err(Error::IncompleteAssignment(_))));
        let mut j = BundleJson::from_descent(&d);
        j.morphisms[1].edge = [0, 1];
        assert!(matches!(j.to_descent(), Err(Error::InvalidValue(_))));
    }
}
