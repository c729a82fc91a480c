//! Exact isospectrality decisions by comparing invariant values.

use num::Zero;
use serde_json::{json, Value};

use crate::builtins;
use crate::error::{Error, Result};
use crate::graph::FundamentalGraph;
use crate::invariants::{invariant_table, InvariantTable, Limits};
use crate::potential::{format_complex, rational, real, CRational, Potential};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Equal Floquet spectra `σ(H(k))` for every `k`.
    Floquet,
    /// Equal spectra of `H(0)`.
    Periodic,
}

/// First invariant whose values differ.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub n: usize,
    /// `None` for a periodic invariant `I_n`.
    pub index: Option<Vec<i64>>,
    pub first: CRational,
    pub second: CRational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub isospectral: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn to_json(&self) -> Value {
        let witness = self.witness.as_ref().map(|w| {
            json!({
                "n": w.n,
                "m": w.index,
                "q1_value": format_complex(&w.first),
                "q2_value": format_complex(&w.second),
            })
        });
        json!({"isospectral": self.isospectral, "witness": witness})
    }
}

/// `m = 0` or the first nonzero coordinate of `m` is positive. Since
/// `I_n^m = I_n^{-m}`, checking this half of the box suffices.
fn in_half_space(m: &[i64]) -> bool {
    m.iter().find(|&&x| x != 0).is_none_or(|&x| x > 0)
}

/// Compares two potentials using a precomputed table. Orders are visited
/// ascending; within an order, nonzero `m` lexicographically, then `m = 0`.
pub fn compare_with_table(
    table: &InvariantTable,
    q1: &Potential,
    q2: &Potential,
    mode: Mode,
) -> Result<Verdict> {
    q1.check_size(table.nvars())?;
    q2.check_size(table.nvars())?;
    for n in 1..=table.max_n() {
        match mode {
            Mode::Periodic => {
                let p = table.marginal(n).expect("marginal present for every order");
                let (a, b) = (p.evaluate(q1), p.evaluate(q2));
                if a != b {
                    return Ok(mismatch(n, None, a, b));
                }
            }
            Mode::Floquet => {
                let mut boxed: Vec<Vec<i64>> = table
                    .support_box(n)
                    .into_iter()
                    .filter(|m| in_half_space(m))
                    .collect();
                boxed.sort_by_key(|m| m.iter().all(|&x| x == 0));
                for m in boxed {
                    let p = table.get(n, &m);
                    let (a, b) = (p.evaluate(q1), p.evaluate(q2));
                    if a != b {
                        return Ok(mismatch(n, Some(m), a, b));
                    }
                }
            }
        }
    }
    Ok(Verdict {
        isospectral: true,
        witness: None,
    })
}

fn mismatch(n: usize, index: Option<Vec<i64>>, first: CRational, second: CRational) -> Verdict {
    Verdict {
        isospectral: false,
        witness: Some(Witness {
            n,
            index,
            first,
            second,
        }),
    }
}

pub fn isospectral_floquet(
    g: &FundamentalGraph,
    q1: &Potential,
    q2: &Potential,
    limits: Limits,
) -> Result<Verdict> {
    q1.check_size(g.vertex_count())?;
    q2.check_size(g.vertex_count())?;
    let table = invariant_table(g, None, limits)?;
    compare_with_table(&table, q1, q2, Mode::Floquet)
}

pub fn isospectral_periodic(
    g: &FundamentalGraph,
    q1: &Potential,
    q2: &Potential,
    limits: Limits,
) -> Result<Verdict> {
    q1.check_size(g.vertex_count())?;
    q2.check_size(g.vertex_count())?;
    let table = invariant_table(g, None, limits)?;
    compare_with_table(&table, q1, q2, Mode::Periodic)
}

/// The two potentials periodic-isospectral to `Q` on the pendant graph:
/// `Q` itself and `(q_1 - 2, q_0 + 2)`.
pub fn pendant_isospectral_pair(g: &FundamentalGraph, q: &Potential) -> Result<[Potential; 2]> {
    let pendant = builtins::pendant();
    if g.dim() != 1 || g.vertex_count() != 2 || g.edges() != pendant.edges() {
        return Err(Error::InvalidGraph("expected the pendant graph".into()));
    }
    q.check_size(2)?;
    let two = real(rational(2, 1));
    let other = Potential::new(vec![q.value(1) - &two, q.value(0) + &two]);
    Ok([q.clone(), other])
}

/// Whether `Q` has every invariant equal to that of the zero potential.
pub fn is_zero_isospectral(table: &InvariantTable, q: &Potential, mode: Mode) -> Result<Verdict> {
    let zero = Potential::zero(q.len());
    debug_assert!(zero.values().iter().all(|v| v.is_zero()));
    compare_with_table(table, q, &zero, mode)
}
