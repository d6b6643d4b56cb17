//! n-best Blaschke-form approximation by cyclic coordinate optimization.
//!
//! For a tuple `(a_1, …, a_n)` the objective is
//! `A = ‖f‖² - Σ_k |⟨f_k, e_{a_k}⟩|²`, evaluated through the sifting chain.
//! Each coordinate update sifts through the other `n - 1` parameters and
//! reselects the remaining one by maximal selection.

use alloc::vec::Vec;

use crate::afd::{greedy_params, maximal_selection, objective, sift};
use crate::atoms::{DiscParam, ParamList};
use crate::error::AfdError;
use crate::search::SearchConfig;
use crate::signal::HardyFunction;

/// Exactly `n` parameters; order fixes the sifting chain only.
#[derive(Debug, Clone, PartialEq)]
pub struct NTuple(Vec<DiscParam>);

impl NTuple {
    pub fn new(params: Vec<DiscParam>) -> Result<Self, AfdError> {
        if params.is_empty() {
            return Err(AfdError::InvalidArgument("tuple must hold at least one parameter"));
        }
        Ok(NTuple(params))
    }

    /// `n` copies of the origin.
    pub fn origin(n: usize) -> Result<Self, AfdError> {
        Self::new(alloc::vec![DiscParam::ORIGIN; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn params(&self) -> &[DiscParam] {
        &self.0
    }

    pub fn to_param_list(&self) -> ParamList {
        ParamList::new(self.0.clone())
    }

    fn replaced(&self, index: usize, a: DiscParam) -> NTuple {
        let mut v = self.0.clone();
        v[index] = a;
        NTuple(v)
    }

    fn without(&self, index: usize) -> Vec<DiscParam> {
        self.0.iter().enumerate().filter(|(i, _)| *i != index).map(|(_, &a)| a).collect()
    }
}

/// Sifts `f` through `params` in order; returns the remainder and the
/// captured energy `Σ|c_k|²`.
fn chain(f: &HardyFunction, params: &[DiscParam]) -> (HardyFunction, f64) {
    let mut g = f.clone();
    let mut captured = 0.0;
    for &a in params {
        captured += objective(&g, a);
        g = sift(&g, a);
    }
    (g, captured)
}

/// `A(f; a_1..a_n)`, clamped at zero.
pub fn n_blaschke_objective(f: &HardyFunction, tuple: &NTuple) -> f64 {
    let (_, captured) = chain(f, tuple.params());
    (f.energy() - captured).max(0.0)
}

/// Reselects coordinate `index` (0-based) on the remainder after the other
/// parameters. The old value is kept unless the new one lowers `A`.
pub fn coordinate_optimize(f: &HardyFunction, tuple: &NTuple, index: usize, search: &SearchConfig) -> NTuple {
    assert!(index < tuple.len(), "coordinate {index} out of range");
    let (rest, _) = chain(f, &tuple.without(index));
    let old = tuple.params()[index];
    let candidate = match maximal_selection(&rest, search) {
        Ok(a) => a,
        Err(_) => return tuple.clone(),
    };
    if objective(&rest, candidate) <= objective(&rest, old) {
        return tuple.clone();
    }
    let updated = tuple.replaced(index, candidate);
    if n_blaschke_objective(f, &updated) > n_blaschke_objective(f, tuple) {
        return tuple.clone();
    }
    updated
}

/// Stopping rule for [`cyclic_afd`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CyclicStop {
    pub max_cycles: usize,
    /// A cycle whose every update changes `A` by less than
    /// `delta_tol · ‖f‖²` ends the run.
    pub delta_tol: f64,
}

impl Default for CyclicStop {
    fn default() -> Self {
        CyclicStop { max_cycles: 200, delta_tol: 1e-10 }
    }
}

/// Tuples `s_0, s_1, …` and objective values `d_0, d_1, …`, one entry per
/// coordinate update.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicTrace {
    pub tuples: Vec<NTuple>,
    pub objectives: Vec<f64>,
    pub cycles: usize,
    pub converged: bool,
}

impl CyclicTrace {
    pub fn final_tuple(&self) -> &NTuple {
        self.tuples.last().expect("trace holds the initial tuple")
    }

    pub fn final_objective(&self) -> f64 {
        *self.objectives.last().expect("trace holds the initial value")
    }

    pub fn is_monotone(&self) -> bool {
        self.objectives.windows(2).all(|w| w[1] <= w[0])
    }
}

/// Round-robin coordinate optimization from `init`.
pub fn cyclic_afd(f: &HardyFunction, init: &NTuple, stop: &CyclicStop, search: &SearchConfig) -> CyclicTrace {
    let scale = f.energy();
    let mut tuple = init.clone();
    let mut d = n_blaschke_objective(f, &tuple);
    let mut trace = CyclicTrace { tuples: alloc::vec![tuple.clone()], objectives: alloc::vec![d], cycles: 0, converged: false };
    while trace.cycles < stop.max_cycles {
        let mut largest = 0.0f64;
        for index in 0..tuple.len() {
            let next = coordinate_optimize(f, &tuple, index, search);
            let dn = n_blaschke_objective(f, &next);
            assert!(dn <= d, "cyclic objective increased from {d} to {dn}");
            largest = largest.max(d - dn);
            tuple = next;
            d = dn;
            trace.tuples.push(tuple.clone());
            trace.objectives.push(d);
        }
        trace.cycles += 1;
        if largest < stop.delta_tol * scale {
            trace.converged = true;
            break;
        }
    }
    trace
}

/// Warm start: the first `n` Core-AFD selections.
pub fn warm_start(f: &HardyFunction, n: usize, search: &SearchConfig) -> Result<NTuple, AfdError> {
    NTuple::new(greedy_params(f, n, search)?)
}

/// Independent runs from several initial tuples.
pub fn cyclic_afd_multi(f: &HardyFunction, inits: &[NTuple], stop: &CyclicStop, search: &SearchConfig) -> Vec<CyclicTrace> {
    #[cfg(feature = "rayon")]
    {
        use rayon::prelude::*;
        inits.par_iter().map(|init| cyclic_afd(f, init, stop, search)).collect()
    }
    #[cfg(not(feature = "rayon"))]
    {
        inits.iter().map(|init| cyclic_afd(f, init, stop, search)).collect()
    }
}

/// True when no single coordinate update lowers `A` by `1e-8 · ‖f‖²` or more.
pub fn cmp_check(f: &HardyFunction, tuple: &NTuple, probe: &SearchConfig) -> bool {
    let base = n_blaschke_objective(f, tuple);
    let threshold = 1e-8 * f.energy();
    (0..tuple.len()).all(|i| base - n_blaschke_objective(f, &coordinate_optimize(f, tuple, i, probe)) < threshold)
}
