//! Explicit formulas for low-order invariants, computed from base prime
//! cycles only. They share no code path with the census in
//! [`crate::invariants`] and serve as its cross-check.

use std::ops::{Add, Mul};

use num::integer::Integer;
use num::Zero;

use crate::cycles::{enumerate_prime_cycles, Cycle, CycleSet};
use crate::error::{Error, Result};
use crate::graph::{FundamentalGraph, ModifiedGraph};
use crate::invariants::Limits;
use crate::poly::PotentialPolynomial;
use crate::potential::rational;

/// Which invariant a closed form targets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Index(Vec<i64>),
    Periodic,
}

/// Complete homogeneous symmetric polynomial `h_s` for `s ∈ {1, 2}`.
pub fn symmetric_h<T>(degree: usize, values: &[T]) -> Result<T>
where
    T: Clone + Zero + Add<Output = T> + Mul<Output = T>,
{
    match degree {
        1 => Ok(values.iter().cloned().fold(T::zero(), |a, x| a + x)),
        2 => {
            let mut acc = T::zero();
            for (j, x) in values.iter().enumerate() {
                for y in &values[j..] {
                    acc = acc + x.clone() * y.clone();
                }
            }
            Ok(acc)
        }
        _ => Err(Error::InvalidArgument(format!(
            "symmetric_h supports degree 1 or 2, got {}",
            degree
        ))),
    }
}

fn vertex_vars(g: &ModifiedGraph<'_>, c: &Cycle) -> Vec<PotentialPolynomial> {
    let nvars = g.vertex_count();
    c.vertices(g)
        .into_iter()
        .map(|v| PotentialPolynomial::variable(nvars, v))
        .collect()
}

/// `Q(c)`: the sum of the potential over the vertices of `c`.
fn cycle_potential(g: &ModifiedGraph<'_>, c: &Cycle) -> PotentialPolynomial {
    vertex_vars(g, c).into_iter().sum()
}

fn sum_over<'a>(
    g: &ModifiedGraph<'_>,
    cycles: impl Iterator<Item = &'a Cycle>,
    f: impl Fn(PotentialPolynomial) -> PotentialPolynomial,
) -> PotentialPolynomial {
    cycles
        .map(|c| f(cycle_potential(g, c)))
        .fold(PotentialPolynomial::zero(g.vertex_count()), |a, p| a + p)
}

/// `I_n^m` or `I_n` for `n <= 3` from the prime cycles of the base graph of
/// length 1 and 2.
pub fn closed_form_small_n(
    g: &FundamentalGraph,
    n: usize,
    target: &Target,
) -> Result<PotentialPolynomial> {
    if n > 3 {
        return Err(Error::OrderTooLarge(n));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("order n must be at least 1".into()));
    }
    let mg = g.modified();
    let nu = g.vertex_count();
    let cycles = enumerate_prime_cycles(&mg, 2, CycleSet::Base, 2)?;
    let p1 = || cycles.iter().filter(|c| c.len() == 1);
    let p2 = || cycles.iter().filter(|c| c.len() == 2);
    let power = |k: u32| PotentialPolynomial::power_sum(nu, k, &rational(1, k as i64));
    let id = |p: PotentialPolynomial| p;
    let square = |p: PotentialPolynomial| p.pow(2);

    let m = match target {
        Target::Periodic => {
            return Ok(match n {
                1 => power(1),
                2 => &power(2) + &sum_over(&mg, p1(), id),
                _ => {
                    let loops = sum_over(&mg, p1(), |p| &p.pow(2) + &p);
                    &(&power(3) + &loops) + &sum_over(&mg, p2(), id)
                }
            })
        }
        Target::Index(m) => m,
    };
    if m.len() != g.dim() {
        return Err(Error::InvalidArgument(format!(
            "index {:?} has {} components, graph dimension is {}",
            m,
            m.len(),
            g.dim()
        )));
    }
    let with_index = |c: &&Cycle, target: &[i64]| c.index == target;
    let p1m = || p1().filter(|c| with_index(c, m));
    let p2m = || p2().filter(|c| with_index(c, m));
    let zero = m.iter().all(|&x| x == 0);

    Ok(match (n, zero) {
        (1, true) => power(1),
        (1, false) => PotentialPolynomial::zero(nu),
        (2, true) => power(2),
        (2, false) => sum_over(&mg, p1m(), id),
        (_, true) => &power(3) + &sum_over(&mg, p2m(), id),
        (_, false) => {
            let mut p = &sum_over(&mg, p1m(), square) + &sum_over(&mg, p2m(), id);
            if m.iter().all(|x| x % 2 == 0) {
                let half: Vec<i64> = m.iter().map(|x| x / 2).collect();
                p = &p + &sum_over(&mg, p1().filter(|c| with_index(c, &half)), id);
            }
            p
        }
    })
}

/// Whether the periodic graph is bipartite: there is a 2-colouring
/// `f: V -> Z/2` and a character `s ∈ (Z/2)^d` with
/// `f(head) = f(tail) + 1 + <s, τ(e)>` for every edge.
pub fn is_bipartite_lift(g: &FundamentalGraph) -> bool {
    let d = g.dim();
    let nu = g.vertex_count();
    (0u64..1 << d).any(|s| {
        let parity = |index: &[i64]| {
            index
                .iter()
                .enumerate()
                .filter(|(j, x)| s >> j & 1 == 1 && x.is_odd())
                .count()
                % 2
        };
        let mut colour = vec![None; nu];
        colour[0] = Some(0usize);
        let mut stack = vec![0];
        while let Some(u) = stack.pop() {
            let cu = colour[u].unwrap();
            for &e in g.out_edges(u) {
                let edge = g.edge(e);
                let want = (cu + 1 + parity(&edge.index)) % 2;
                match colour[edge.head] {
                    None => {
                        colour[edge.head] = Some(want);
                        stack.push(edge.head);
                    }
                    Some(c) if c != want => return false,
                    Some(_) => {}
                }
            }
        }
        true
    })
}

/// Linear and quadratic invariants for a primitive index `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearQuadratic {
    pub index: Vec<i64>,
    /// `n(m)`: length of the shortest base cycle with index `m`.
    pub shortest: usize,
    /// `I_{n+1}^m`.
    pub linear: PotentialPolynomial,
    /// `I_{n+2}^m`.
    pub quadratic: PotentialPolynomial,
    pub bipartite: bool,
    /// `P_n^m`.
    pub shortest_cycles: Vec<Cycle>,
    /// `P_{n+1}^m`.
    pub next_cycles: Vec<Cycle>,
}

pub fn is_primitive(m: &[i64]) -> bool {
    m.iter().fold(0i64, |acc, x| acc.gcd(x)) == 1
}

pub fn linear_quadratic_invariants(
    g: &FundamentalGraph,
    m: &[i64],
    limits: Limits,
) -> Result<LinearQuadratic> {
    if m.len() != g.dim() {
        return Err(Error::InvalidArgument(format!(
            "index {:?} has {} components, graph dimension is {}",
            m,
            m.len(),
            g.dim()
        )));
    }
    if !is_primitive(m) {
        return Err(Error::NotPrimitive(m.to_vec()));
    }
    let mg = g.modified();
    let mut found = None;
    for n in 1..limits.cap {
        let cycles = enumerate_prime_cycles(&mg, n, CycleSet::Base, limits.cap)?;
        if cycles.iter().any(|c| c.len() == n && c.index == m) {
            found = Some((n, cycles));
            break;
        }
    }
    let (n, _) = found.ok_or_else(|| Error::NoCycleWithIndex {
        index: m.to_vec(),
        cap: limits.cap,
    })?;
    let cycles = enumerate_prime_cycles(&mg, n + 1, CycleSet::Base, limits.cap)?;
    let pick = |len: usize| -> Vec<Cycle> {
        cycles
            .iter()
            .filter(|c| c.len() == len && c.index == m)
            .cloned()
            .collect()
    };
    let shortest_cycles = pick(n);
    let next_cycles = pick(n + 1);
    let bipartite = is_bipartite_lift(g);
    if bipartite && !next_cycles.is_empty() {
        return Err(Error::InvalidGraph(format!(
            "bipartite graph has a cycle of length {} with index {:?}",
            n + 1,
            m
        )));
    }
    let h = |degree: usize, set: &[Cycle]| -> Result<PotentialPolynomial> {
        set.iter()
            .map(|c| symmetric_h(degree, &vertex_vars(&mg, c)))
            .try_fold(PotentialPolynomial::zero(g.vertex_count()), |a, p| {
                Ok(a + p?)
            })
    };
    let linear = h(1, &shortest_cycles)?;
    let quadratic = &h(2, &shortest_cycles)? + &h(1, &next_cycles)?;
    Ok(LinearQuadratic {
        index: m.to_vec(),
        shortest: n,
        linear,
        quadratic,
        bipartite,
        shortest_cycles,
        next_cycles,
    })
}
