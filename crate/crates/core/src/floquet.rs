//! Floquet matrices `H(k) = A(k) + Q` and a numeric check of the trace
//! formula `Tr(H^n(k) - A^n(k)) = Σ_m n I_n^m(Q) cos<m, k>`.

use std::f64::consts::PI;

use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::FundamentalGraph;
use crate::invariants::{invariant_table, InvariantTable, Limits};
use crate::potential::{rational, to_complex64, Potential};

/// Dense `ν × ν` complex matrix at a fixed quasimomentum.
#[derive(Clone, Debug, PartialEq)]
pub struct FloquetMatrix {
    k: Vec<f64>,
    size: usize,
    data: Vec<Complex64>,
}

impl FloquetMatrix {
    fn zeros(size: usize, k: Vec<f64>) -> Self {
        FloquetMatrix {
            k,
            size,
            data: vec![Complex64::new(0.0, 0.0); size * size],
        }
    }

    pub fn k(&self) -> &[f64] {
        &self.k
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.size + col]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.size).map(|i| self.entry(i, i)).sum()
    }

    pub fn multiply(&self, other: &FloquetMatrix) -> FloquetMatrix {
        let n = self.size;
        let mut out = FloquetMatrix::zeros(n, self.k.clone());
        for i in 0..n {
            for l in 0..n {
                let a = self.data[i * n + l];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[l * n + j];
                }
            }
        }
        out
    }

    /// Maximum absolute row sum; bounds the spectral radius.
    pub fn norm(&self) -> f64 {
        (0..self.size)
            .map(|i| (0..self.size).map(|j| self.entry(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.size).all(|i| {
            (0..self.size).all(|j| (self.entry(i, j) - self.entry(j, i).conj()).norm() <= tol)
        })
    }
}

/// `H(k)[v][u] = Σ_{e=(v,u)} exp(i<τ(e), k>) + Q(v) δ_{vu}`.
pub fn build_floquet(g: &FundamentalGraph, q: &[Complex64], k: &[f64]) -> Result<FloquetMatrix> {
    if k.len() != g.dim() {
        return Err(Error::InvalidArgument(format!(
            "quasimomentum has {} components, graph dimension is {}",
            k.len(),
            g.dim()
        )));
    }
    if q.len() != g.vertex_count() {
        return Err(Error::PotentialSize {
            expected: g.vertex_count(),
            found: q.len(),
        });
    }
    let n = g.vertex_count();
    let mut h = FloquetMatrix::zeros(n, k.to_vec());
    for e in g.edges() {
        let phase: f64 = e.index.iter().zip(k).map(|(&t, &x)| t as f64 * x).sum();
        h.data[e.tail * n + e.head] += Complex64::from_polar(1.0, phase);
    }
    for (v, &value) in q.iter().enumerate() {
        h.data[v * n + v] += value;
    }
    Ok(h)
}

pub fn trace_power(m: &FloquetMatrix, n: usize) -> Complex64 {
    trace_powers(m, n)
        .pop()
        .unwrap_or_else(|| Complex64::new(m.size as f64, 0.0))
}

/// `[Tr M, Tr M^2, ..., Tr M^n_max]`.
pub fn trace_powers(m: &FloquetMatrix, n_max: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n_max);
    let mut power = m.clone();
    for n in 1..=n_max {
        if n > 1 {
            power = power.multiply(m);
        }
        out.push(power.trace());
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    /// Highest order checked; defaults to `ν`.
    pub max_n: Option<usize>,
    /// Grid points per axis.
    pub grid: usize,
    /// Additional seeded random quasimomenta.
    pub samples: usize,
    pub seed: u64,
    /// Relative tolerance.
    pub tol: f64,
    pub limits: Limits,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_n: None,
            grid: 8,
            samples: 16,
            seed: 0,
            tol: 1e-9,
            limits: Limits::default(),
        }
    }
}

/// Grid `k_j = -π + (2π/N)(i + 1/3)`, followed by `samples` points drawn
/// uniformly from `[-π, π)^d`.
pub fn k_points(dim: usize, grid: usize, samples: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut points: Vec<Vec<f64>> = vec![Vec::new()];
    if grid > 0 {
        let axis: Vec<f64> = (0..grid)
            .map(|i| -PI + 2.0 * PI / grid as f64 * (i as f64 + 1.0 / 3.0))
            .collect();
        for _ in 0..dim {
            points = points
                .into_iter()
                .flat_map(|prefix| {
                    axis.iter().map(move |&x| {
                        let mut next = prefix.clone();
                        next.push(x);
                        next
                    })
                })
                .collect();
        }
        // Rightmost axis varies fastest above; flip so that k_1 does.
        for p in &mut points {
            p.reverse();
        }
    } else {
        points.clear();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        points.push((0..dim).map(|_| rng.gen_range(-PI..PI)).collect());
    }
    points
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceSample {
    pub n: usize,
    /// Position in the quasimomentum list.
    pub sample: usize,
    pub k: Vec<f64>,
    pub lhs: (f64, f64),
    pub rhs: (f64, f64),
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    /// Ordered by `(n, sample)`.
    pub samples: Vec<TraceSample>,
    pub max_residual: f64,
    pub max_abs_lhs: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// For real potentials: whether every `H(k)` was Hermitian and every
    /// `|Im Tr H^n(k)| <= 1e-10 ||H(k)||^n`. `None` for complex potentials.
    pub hermitian: Option<bool>,
}

impl VerificationReport {
    pub fn to_csv(&self, dim: usize) -> String {
        let mut out = String::from("n");
        for j in 1..=dim {
            out.push_str(&format!(",k{}", j));
        }
        out.push_str(",lhs_re,lhs_im,rhs,residual,rhs_im\n");
        for s in &self.samples {
            out.push_str(&s.n.to_string());
            for x in &s.k {
                out.push_str(&format!(",{:e}", x));
            }
            out.push_str(&format!(
                ",{:e},{:e},{:e},{:e},{:e}\n",
                s.lhs.0, s.lhs.1, s.rhs.0, s.residual, s.rhs.1
            ));
        }
        out
    }
}

/// Checks the trace formula against a precomputed table.
pub fn verify_with_table(
    g: &FundamentalGraph,
    q: &Potential,
    table: &InvariantTable,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    q.check_size(g.vertex_count())?;
    let max_n = options.max_n.unwrap_or(g.vertex_count()).min(table.max_n());
    // Coefficients n I_n^m(Q), evaluated exactly, nonzero only.
    let coeffs: Vec<Vec<(Vec<f64>, Complex64)>> = (1..=max_n)
        .map(|n| {
            table
                .entries()
                .filter(|(order, _, _)| *order == n)
                .filter_map(|(_, m, p)| {
                    let value = p.evaluate(q) * crate::potential::real(rational(n as i64, 1));
                    let value = to_complex64(&value);
                    (value != Complex64::new(0.0, 0.0))
                        .then(|| (m.iter().map(|&x| x as f64).collect(), value))
                })
                .collect()
        })
        .collect();
    let qv = q.to_complex64();
    let zero = vec![Complex64::new(0.0, 0.0); g.vertex_count()];
    let real = q.is_real();
    let points = k_points(g.dim(), options.grid, options.samples, options.seed);

    let per_point: Vec<Result<(Vec<TraceSample>, bool)>> = points
        .par_iter()
        .enumerate()
        .map(|(i, k)| {
            let h = build_floquet(g, &qv, k)?;
            let a = build_floquet(g, &zero, k)?;
            let th = trace_powers(&h, max_n);
            let ta = trace_powers(&a, max_n);
            let norm = h.norm();
            let mut hermitian = !real || h.is_hermitian(1e-12);
            let mut rows = Vec::with_capacity(max_n);
            for n in 1..=max_n {
                let lhs = th[n - 1] - ta[n - 1];
                let rhs: Complex64 = coeffs[n - 1]
                    .iter()
                    .map(|(m, c)| {
                        let dot: f64 = m.iter().zip(k).map(|(a, b)| a * b).sum();
                        c * dot.cos()
                    })
                    .sum();
                if real && th[n - 1].im.abs() > 1e-10 * norm.max(1.0).powi(n as i32) {
                    hermitian = false;
                }
                rows.push(TraceSample {
                    n,
                    sample: i,
                    k: k.clone(),
                    lhs: (lhs.re, lhs.im),
                    rhs: (rhs.re, rhs.im),
                    residual: (lhs - rhs).norm(),
                });
            }
            Ok((rows, hermitian))
        })
        .collect();

    let mut samples = Vec::with_capacity(points.len() * max_n);
    let mut hermitian = true;
    for r in per_point {
        let (rows, h) = r?;
        samples.extend(rows);
        hermitian &= h;
    }
    samples.sort_by_key(|s| (s.n, s.sample));
    let max_residual = samples.iter().map(|s| s.residual).fold(0.0, f64::max);
    let max_abs_lhs = samples
        .iter()
        .map(|s| Complex64::new(s.lhs.0, s.lhs.1).norm())
        .fold(0.0, f64::max);
    let pass = max_residual <= options.tol * max_abs_lhs.max(1.0);
    Ok(VerificationReport {
        samples,
        max_residual,
        max_abs_lhs,
        tolerance: options.tol,
        pass,
        hermitian: real.then_some(hermitian),
    })
}

pub fn verify_trace_formula(
    g: &FundamentalGraph,
    q: &Potential,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    q.check_size(g.vertex_count())?;
    let max_n = options.max_n.unwrap_or(g.vertex_count());
    let table = invariant_table(g, Some(max_n), options.limits)?;
    verify_with_table(g, q, &table, options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn pendant_adjacency() {
        let g = builtins::pendant();
        let k = 0.7;
        let a = build_floquet(&g, &[c(0.0), c(0.0)], &[k]).unwrap();
        assert!((a.entry(0, 0) - c(2.0 * k.cos())).norm() < 1e-14);
        assert_eq!(a.entry(0, 1), c(1.0));
        assert_eq!(a.entry(1, 0), c(1.0));
        assert_eq!(a.entry(1, 1), c(0.0));
        let a0 = build_floquet(&g, &[c(0.0), c(0.0)], &[0.0]).unwrap();
        assert!((trace_power(&a0, 1) - c(2.0)).norm() < 1e-14);
    }

    #[test]
    fn pendant_second_trace_difference() {
        let g = builtins::pendant();
        let (q0, q1, k) = (0.5, -1.25, 1.1);
        let h = build_floquet(&g, &[c(q0), c(q1)], &[k]).unwrap();
        let a = build_floquet(&g, &[c(0.0), c(0.0)], &[k]).unwrap();
        let diff = trace_power(&h, 2) - trace_power(&a, 2);
        let expected = q0 * q0 + q1 * q1 + 2.0 * q0 * 2.0 * k.cos();
        assert!((diff - c(expected)).norm() < 1e-12);
    }

    #[test]
    fn zero_quasimomentum_row_sums_are_degrees() {
        let g = builtins::kagome();
        let a = build_floquet(&g, &[c(0.0); 3], &[0.0, 0.0]).unwrap();
        for v in 0..3 {
            let row: Complex64 = (0..3).map(|u| a.entry(v, u)).sum();
            assert!((row - c(g.degree(v) as f64)).norm() < 1e-14);
        }
    }

    #[test]
    fn real_potential_gives_hermitian_matrix() {
        let g = builtins::kagome();
        let h = build_floquet(&g, &[c(1.0), c(-2.0), c(0.5)], &[0.3, -2.0]).unwrap();
        assert!(h.is_hermitian(1e-14));
    }

    #[test]
    fn grid_layout() {
        let pts = k_points(2, 2, 3, 7);
        assert_eq!(pts.len(), 4 + 3);
        assert_eq!(pts[1][1], pts[0][1]);
        assert!(pts[1][0] > pts[0][0]);
        assert_eq!(pts, k_points(2, 2, 3, 7));
        assert!(pts.iter().flatten().all(|x| (-PI..PI).contains(x)));
    }

    #[test]
    fn kagome_passes() {
        let g = builtins::kagome();
        let q = Potential::from_integers(&[1, 2, 3]);
        let opts = VerifyOptions {
            max_n: Some(3),
            ..Default::default()
        };
        let r = verify_trace_formula(&g, &q, &opts).unwrap();
        assert!(r.pass);
        assert!(r.max_residual <= 1e-9);
        assert_eq!(r.hermitian, Some(true));
        assert_eq!(r.samples.len(), 3 * (64 + 16));
    }

    #[test]
    fn zero_potential_is_trivial() {
        let g = builtins::pendant();
        let r = verify_trace_formula(&g, &Potential::zero(2), &VerifyOptions::default()).unwrap();
        assert!(r.pass);
        assert!(r
            .samples
            .iter()
            .all(|s| s.lhs.0.abs() < 1e-12 && s.rhs == (0.0, 0.0)));
    }

    #[test]
    fn csv_header() {
        let g = builtins::pendant();
        let opts = VerifyOptions {
            grid: 1,
            samples: 0,
            ..Default::default()
        };
        let r = verify_trace_formula(&g, &Potential::from_integers(&[1, 0]), &opts).unwrap();
        let csv = r.to_csv(1);
        assert!(csv.starts_with("n,k1,lhs_re,lhs_im,rhs,residual,rhs_im\n"));
        assert_eq!(csv.lines().count(), 1 + 2);
    }
}
