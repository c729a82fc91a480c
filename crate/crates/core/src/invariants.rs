//! Floquet invariants `I_n^m` and periodic invariants `I_n` as exact
//! polynomials in the potential values.

use std::collections::{BTreeMap, HashMap};

use num::rational::BigRational;
use num::BigInt;
use serde_json::{json, Value};

use crate::cycles::{
    check_cap, enumerate_closed_paths, fold_prime_cycles, sum_index, weight_of, CycleSet,
    PathFilter,
};
use crate::error::{Error, Result};
use crate::graph::{FundamentalGraph, ModifiedGraph};
use crate::poly::PotentialPolynomial;
use crate::DEFAULT_LENGTH_CAP;

/// Upper bound on path and cycle lengths explored by any enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            cap: DEFAULT_LENGTH_CAP,
        }
    }
}

impl Limits {
    pub fn new(cap: usize) -> Self {
        Limits { cap }
    }
}

type CensusKey = (usize, Vec<i64>, Vec<u32>);

/// Number of prime cycles with an added loop per (length, index, weight).
fn census(g: &ModifiedGraph<'_>, max_len: usize) -> HashMap<CensusKey, u64> {
    fold_prime_cycles(
        g,
        max_len,
        CycleSet::WithAddedLoop,
        HashMap::new,
        |acc: &mut HashMap<CensusKey, u64>, seq| {
            *acc.entry((seq.len(), sum_index(g, seq), weight_of(g, seq)))
                .or_insert(0) += 1;
        },
        |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        },
    )
}

/// Calls `emit(n, m, exps, coeff)` for each term `(1/r) ω(c)^r` with
/// `r|c| <= max_n`, aggregated over prime cycles of equal weight.
fn expand_census(
    census: &HashMap<CensusKey, u64>,
    max_n: usize,
    mut emit: impl FnMut(usize, Vec<i64>, Vec<u32>, BigRational),
) {
    for ((len, index, weight), &count) in census {
        for r in 1..=max_n / len {
            let m = index.iter().map(|x| x * r as i64).collect();
            let exps = weight.iter().map(|x| x * r as u32).collect();
            let coeff = BigRational::new(BigInt::from(count), BigInt::from(r));
            emit(r * len, m, exps, coeff);
        }
    }
}

fn check_order(n: usize, limits: Limits) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("order n must be at least 1".into()));
    }
    check_cap(n, limits.cap)
}

fn check_index(g: &FundamentalGraph, m: &[i64]) -> Result<()> {
    if m.len() != g.dim() {
        return Err(Error::InvalidArgument(format!(
            "index {:?} has {} components, graph dimension is {}",
            m,
            m.len(),
            g.dim()
        )));
    }
    Ok(())
}

/// `I_n^m(Q)`.
pub fn invariant_floquet(
    g: &FundamentalGraph,
    n: usize,
    m: &[i64],
    limits: Limits,
) -> Result<PotentialPolynomial> {
    check_order(n, limits)?;
    check_index(g, m)?;
    let census = census(&g.modified(), n);
    let mut poly = PotentialPolynomial::zero(g.vertex_count());
    expand_census(&census, n, |len, index, exps, coeff| {
        if len == n && index == m {
            poly.add_term(exps, coeff);
        }
    });
    Ok(poly)
}

/// `I_n(Q) = Σ_m I_n^m(Q)`.
pub fn invariant_periodic(
    g: &FundamentalGraph,
    n: usize,
    limits: Limits,
) -> Result<PotentialPolynomial> {
    check_order(n, limits)?;
    let census = census(&g.modified(), n);
    let mut poly = PotentialPolynomial::zero(g.vertex_count());
    expand_census(&census, n, |len, _, exps, coeff| {
        if len == n {
            poly.add_term(exps, coeff);
        }
    });
    Ok(poly)
}

/// `t_n^m(Q)`: the sum of weights of all rooted closed paths of length `n`
/// and index `m` through at least one added loop. Equals `n I_n^m(Q)`.
pub fn closed_path_weight_sum(
    g: &FundamentalGraph,
    n: usize,
    m: &[i64],
    limits: Limits,
) -> Result<PotentialPolynomial> {
    check_order(n, limits)?;
    check_index(g, m)?;
    let mg = g.modified();
    let filter = PathFilter::with_added_loop().index(m.to_vec());
    let mut poly = PotentialPolynomial::zero(g.vertex_count());
    for path in enumerate_closed_paths(&mg, n, &filter, limits.cap)? {
        poly.add_term(path.weight(&mg), BigRational::from_integer(1.into()));
    }
    Ok(poly)
}

/// Every `m` with `|m_j| <= (n-1) reach_j`, in lexicographic order.
pub fn support_box(reach: &[i64], n: usize) -> Vec<Vec<i64>> {
    let bounds: Vec<i64> = reach.iter().map(|r| r * (n as i64 - 1).max(0)).collect();
    let mut out = vec![Vec::with_capacity(reach.len())];
    for b in bounds {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (-b..=b).map(move |x| {
                    let mut next = prefix.clone();
                    next.push(x);
                    next
                })
            })
            .collect();
    }
    out
}

/// All `I_n^m` with `n <= max_n` and `m` in the per-coordinate support box,
/// together with the marginals `I_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantTable {
    nvars: usize,
    dim: usize,
    max_n: usize,
    reach: Vec<i64>,
    entries: BTreeMap<(usize, Vec<i64>), PotentialPolynomial>,
    marginals: BTreeMap<usize, PotentialPolynomial>,
}

impl InvariantTable {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    /// Per-axis maximum of `|τ_j(e)|` over base edges.
    pub fn reach(&self) -> &[i64] {
        &self.reach
    }

    pub fn support_box(&self, n: usize) -> Vec<Vec<i64>> {
        support_box(&self.reach, n)
    }

    /// `None` when `(n, m)` lies outside the table.
    pub fn entry(&self, n: usize, m: &[i64]) -> Option<&PotentialPolynomial> {
        self.entries.get(&(n, m.to_vec()))
    }

    /// `I_n^m`, zero outside the support box. Panics if `n > max_n`.
    pub fn get(&self, n: usize, m: &[i64]) -> PotentialPolynomial {
        assert!(n >= 1 && n <= self.max_n, "order {} outside table", n);
        self.entry(n, m)
            .cloned()
            .unwrap_or_else(|| PotentialPolynomial::zero(self.nvars))
    }

    pub fn marginal(&self, n: usize) -> Option<&PotentialPolynomial> {
        self.marginals.get(&n)
    }

    /// `((n, m), I_n^m)` in order of `n`, then `m`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, &[i64], &PotentialPolynomial)> {
        self.entries.iter().map(|((n, m), p)| (*n, m.as_slice(), p))
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries()
            .map(|(n, m, p)| json!({"n": n, "m": m, "poly": p.to_json_terms()}))
            .collect();
        let marginals: Vec<Value> = self
            .marginals
            .iter()
            .map(|(n, p)| json!({"n": n, "poly": p.to_json_terms()}))
            .collect();
        json!({
            "nu": self.nvars,
            "dim": self.dim,
            "max_n": self.max_n,
            "entries": entries,
            "marginals": marginals,
        })
    }
}

/// Builds the table for `n = 1..=max_n`; `max_n` defaults to `ν`.
pub fn invariant_table(
    g: &FundamentalGraph,
    max_n: Option<usize>,
    limits: Limits,
) -> Result<InvariantTable> {
    let max_n = max_n.unwrap_or(g.vertex_count());
    check_order(max_n, limits)?;
    let nvars = g.vertex_count();
    let reach = g.max_abs_index();
    let mut entries = BTreeMap::new();
    let mut marginals = BTreeMap::new();
    for n in 1..=max_n {
        for m in support_box(&reach, n) {
            entries.insert((n, m), PotentialPolynomial::zero(nvars));
        }
        marginals.insert(n, PotentialPolynomial::zero(nvars));
    }
    let census = census(&g.modified(), max_n);
    let mut outside = None;
    expand_census(&census, max_n, |n, m, exps, coeff| {
        marginals
            .get_mut(&n)
            .unwrap()
            .add_term(exps.clone(), coeff.clone());
        match entries.get_mut(&(n, m.clone())) {
            Some(p) => p.add_term(exps, coeff),
            None => outside = Some((n, m)),
        }
    });
    if let Some((n, m)) = outside {
        return Err(Error::InvalidGraph(format!(
            "cycle of length {} with index {:?} lies outside the support box",
            n, m
        )));
    }
    Ok(InvariantTable {
        nvars,
        dim: g.dim(),
        max_n,
        reach,
        entries,
        marginals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::potential::rational;

    fn q(nvars: usize, v: usize) -> PotentialPolynomial {
        PotentialPolynomial::variable(nvars, v)
    }

    #[test]
    fn pendant_second_order() {
        let g = builtins::pendant();
        let lim = Limits::default();
        assert_eq!(invariant_floquet(&g, 2, &[1], lim).unwrap(), q(2, 0));
        assert_eq!(invariant_floquet(&g, 2, &[-1], lim).unwrap(), q(2, 0));
        let expected = &PotentialPolynomial::power_sum(2, 2, &rational(1, 2))
            + &q(2, 0).scale(&rational(2, 1));
        assert_eq!(invariant_periodic(&g, 2, lim).unwrap(), expected);
    }

    #[test]
    fn first_order_is_trace() {
        let g = builtins::kagome();
        let i1 = invariant_periodic(&g, 1, Limits::default()).unwrap();
        assert_eq!(i1, PotentialPolynomial::power_sum(3, 1, &rational(1, 1)));
    }

    #[test]
    fn kagome_third_order_index() {
        let g = builtins::kagome();
        let p = invariant_floquet(&g, 3, &[1, 0], Limits::default()).unwrap();
        assert_eq!(p, &q(3, 0) + &q(3, 1));
    }

    #[test]
    fn support_box_shape() {
        assert_eq!(support_box(&[1], 1), vec![vec![0]]);
        assert_eq!(support_box(&[1, 0], 2).len(), 3);
        assert_eq!(support_box(&[1, 1], 3).len(), 25);
        assert_eq!(support_box(&[1], 2), vec![vec![-1], vec![0], vec![1]]);
    }

    #[test]
    fn table_marginals_and_lookup() {
        let g = builtins::pendant();
        let t = invariant_table(&g, None, Limits::default()).unwrap();
        assert_eq!(t.max_n(), 2);
        assert_eq!(t.get(2, &[1]), q(2, 0));
        assert!(t.get(1, &[5]).is_zero());
        assert_eq!(
            t.marginal(2).unwrap(),
            &invariant_periodic(&g, 2, Limits::default()).unwrap()
        );
        let json = t.to_json();
        assert_eq!(json["entries"].as_array().unwrap().len(), 1 + 3);
    }

    #[test]
    fn weight_sum_matches_cycle_formula() {
        let g = builtins::kagome();
        let lim = Limits::default();
        let t = closed_path_weight_sum(&g, 3, &[1, 0], lim).unwrap();
        let i = invariant_floquet(&g, 3, &[1, 0], lim).unwrap();
        assert_eq!(t, i.scale(&rational(3, 1)));
    }

    #[test]
    fn cap_and_order_errors() {
        let g = builtins::pendant();
        assert!(matches!(
            invariant_periodic(&g, 13, Limits::default()),
            Err(Error::CapExceeded {
                requested: 13,
                cap: 12
            })
        ));
        assert!(invariant_periodic(&g, 0, Limits::default()).is_err());
        assert!(invariant_floquet(&g, 2, &[1, 0], Limits::default()).is_err());
    }
}
