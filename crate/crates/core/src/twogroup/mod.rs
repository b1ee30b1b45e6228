//! Crossed modules and nonabelian `H¹` on finite nerves.

pub mod cocycle;
pub mod group;
pub mod search;

pub use cocycle::{
    apply_gauge, are_cohomologous, class_index, compare_with_abelian, elementary_divisors, gauge_fixed_cocycles, h0_pointed_set,
    h1_pointed_set, h_minus1, is_cocycle, shift_module, verify_cocycle, AbelianComparison, Gauge, H1PointedSet, TwoGroupCocycle,
    Violation,
};
pub use group::{CrossedModule, CrossedModuleJson, FiniteGroup};
pub use search::{Budget, Csp, DEFAULT_BUDGET};
