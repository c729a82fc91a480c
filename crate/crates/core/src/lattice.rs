//! The lattice `Z^d` with period lattice `p_1 Z ⊕ ... ⊕ p_d Z`: builder,
//! closed-form invariants and their discrete Fourier forms.
//!
//! Vertex `n = (n_1, ..., n_d)` with `0 <= n_j < p_j` has id
//! `n_1 + p_1 (n_2 + p_2 (n_3 + ...))`. Only wrap-around edges
//! (`n_j = p_j - 1 -> 0`) carry a nonzero index, namely `e_j`.

use std::f64::consts::PI;

use num::complex::Complex64;
use num::rational::BigRational;
use num::Zero;

use crate::error::{Error, Result};
use crate::graph::{EdgeDecl, FundamentalGraph};
use crate::poly::PotentialPolynomial;
use crate::potential::{rational, CRational, Potential};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZdSpec {
    periods: Vec<usize>,
}

impl ZdSpec {
    pub fn new(periods: Vec<usize>) -> Result<Self> {
        if periods.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one period is required".into(),
            ));
        }
        if let Some(p) = periods.iter().find(|&&p| p < 2) {
            return Err(Error::InvalidArgument(format!("period {} < 2", p)));
        }
        Ok(ZdSpec { periods })
    }

    pub fn dim(&self) -> usize {
        self.periods.len()
    }

    pub fn periods(&self) -> &[usize] {
        &self.periods
    }

    /// `p = p_1 ... p_d`, the number of fundamental vertices.
    pub fn volume(&self) -> usize {
        self.periods.iter().product()
    }

    /// Number of periods equal to 2.
    pub fn d0(&self) -> usize {
        self.periods.iter().filter(|&&p| p == 2).count()
    }

    pub fn vertex_id(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .zip(&self.periods)
            .rev()
            .fold(0, |acc, (&c, &p)| acc * p + c)
    }

    pub fn coords(&self, mut id: usize) -> Vec<usize> {
        self.periods
            .iter()
            .map(|&p| {
                let c = id % p;
                id /= p;
                c
            })
            .collect()
    }

    /// Vertex ids of every cycle of index `e_axis` of length `p_axis`,
    /// one list per choice of the remaining coordinates.
    pub fn lines(&self, axis: usize) -> Vec<Vec<usize>> {
        (0..self.volume())
            .filter(|&id| self.coords(id)[axis] == 0)
            .map(|id| {
                let mut c = self.coords(id);
                (0..self.periods[axis])
                    .map(|x| {
                        c[axis] = x;
                        self.vertex_id(&c)
                    })
                    .collect()
            })
            .collect()
    }
}

pub fn build_zd(spec: &ZdSpec) -> Result<FundamentalGraph> {
    let d = spec.dim();
    let mut edges = Vec::with_capacity(d * spec.volume());
    for id in 0..spec.volume() {
        let coords = spec.coords(id);
        for j in 0..d {
            let mut next = coords.clone();
            next[j] = (coords[j] + 1) % spec.periods[j];
            let mut index = vec![0i64; d];
            if coords[j] + 1 == spec.periods[j] {
                index[j] = 1;
            }
            edges.push(EdgeDecl::new(id, spec.vertex_id(&next), index));
        }
    }
    FundamentalGraph::new(d, spec.volume(), edges)
}

fn sum_of_powers(nvars: usize, power: u32, coeff: BigRational) -> PotentialPolynomial {
    PotentialPolynomial::power_sum(nvars, power, &coeff)
}

/// Closed forms of `I_1`, `I_2`, `I_3`:
/// `I_3 = (1/3) Σ Q^3 + 2 (d + d0) I_1`.
pub fn zd_periodic_polynomials(spec: &ZdSpec) -> [PotentialPolynomial; 3] {
    let p = spec.volume();
    let i1 = sum_of_powers(p, 1, rational(1, 1));
    let i2 = sum_of_powers(p, 2, rational(1, 2));
    let shift = 2 * (spec.dim() + spec.d0()) as i64;
    let i3 = &sum_of_powers(p, 3, rational(1, 3)) + &i1.scale(&rational(shift, 1));
    [i1, i2, i3]
}

/// `Σ_lines (Σ_{n_axis} Q(n))^2` over the cycles of index `e_axis`.
pub fn row_sum_squares_polynomial(spec: &ZdSpec, axis: usize) -> PotentialPolynomial {
    let p = spec.volume();
    spec.lines(axis)
        .into_iter()
        .map(|line| {
            let s: PotentialPolynomial = line
                .into_iter()
                .map(|v| PotentialPolynomial::variable(p, v))
                .sum();
            s.pow(2)
        })
        .sum()
}

/// `(I_{p_j+1}^{e_j}, I_{p_j+2}^{e_j}) = (I_1, I_2 + (1/2) Σ_lines (row sum)^2)`.
pub fn zd_floquet_polynomials(
    spec: &ZdSpec,
    axis: usize,
) -> Result<(PotentialPolynomial, PotentialPolynomial)> {
    check_axis(spec, axis)?;
    let [i1, i2, _] = zd_periodic_polynomials(spec);
    let quadratic = &i2 + &row_sum_squares_polynomial(spec, axis).scale(&rational(1, 2));
    Ok((i1, quadratic))
}

fn check_axis(spec: &ZdSpec, axis: usize) -> Result<()> {
    if axis >= spec.dim() {
        return Err(Error::InvalidArgument(format!(
            "axis {} out of range for dimension {}",
            axis,
            spec.dim()
        )));
    }
    Ok(())
}

pub fn zd_periodic_invariants(spec: &ZdSpec, q: &Potential) -> Result<[CRational; 3]> {
    q.check_size(spec.volume())?;
    let [a, b, c] = zd_periodic_polynomials(spec);
    Ok([a.evaluate(q), b.evaluate(q), c.evaluate(q)])
}

pub fn zd_floquet_invariants(
    spec: &ZdSpec,
    q: &Potential,
    axis: usize,
) -> Result<(CRational, CRational)> {
    q.check_size(spec.volume())?;
    let (lin, quad) = zd_floquet_polynomials(spec, axis)?;
    Ok((lin.evaluate(q), quad.evaluate(q)))
}

pub fn row_sum_squares(spec: &ZdSpec, q: &Potential, axis: usize) -> Result<CRational> {
    q.check_size(spec.volume())?;
    check_axis(spec, axis)?;
    let mut total = CRational::zero();
    for line in spec.lines(axis) {
        let s = line
            .iter()
            .fold(CRational::zero(), |acc, &v| acc + q.value(v));
        total += &s * &s;
    }
    Ok(total)
}

/// Discrete Fourier transform of a potential on the fundamental cell,
/// indexed by the same ids as the vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierPotential {
    pub values: Vec<Complex64>,
}

fn phase(spec: &ZdSpec, l: &[usize], n: &[usize]) -> f64 {
    l.iter()
        .zip(n)
        .zip(spec.periods())
        .map(|((&a, &b), &p)| ((a * b) % p) as f64 / p as f64)
        .sum::<f64>()
        * 2.0
        * PI
}

/// `Q̂(l) = (1/p) Σ_n exp(-2πi Σ_j l_j n_j / p_j) Q(n)`, by direct summation.
pub fn dft(spec: &ZdSpec, q: &[Complex64]) -> FourierPotential {
    let p = spec.volume();
    let coords: Vec<Vec<usize>> = (0..p).map(|id| spec.coords(id)).collect();
    let values = coords
        .iter()
        .map(|l| {
            coords
                .iter()
                .zip(q)
                .map(|(n, &value)| value * Complex64::from_polar(1.0, -phase(spec, l, n)))
                .sum::<Complex64>()
                / p as f64
        })
        .collect();
    FourierPotential { values }
}

pub fn inverse_dft(spec: &ZdSpec, hat: &FourierPotential) -> Vec<Complex64> {
    let p = spec.volume();
    let coords: Vec<Vec<usize>> = (0..p).map(|id| spec.coords(id)).collect();
    coords
        .iter()
        .map(|n| {
            coords
                .iter()
                .zip(&hat.values)
                .map(|(l, &value)| value * Complex64::from_polar(1.0, phase(spec, l, n)))
                .sum()
        })
        .collect()
}

/// `I_1 = p Q̂(0)`; valid for complex potentials as well.
pub fn fourier_i1(spec: &ZdSpec, q: &Potential) -> Result<Complex64> {
    q.check_size(spec.volume())?;
    let hat = dft(spec, &q.to_complex64());
    Ok(hat.values[0] * spec.volume() as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FourierInvariants {
    pub i1: f64,
    pub i2: f64,
    /// `I_{p_j+2}^{e_j}` for each axis `j`.
    pub quadratic_floquet: Vec<f64>,
}

/// Fourier forms of `I_1`, `I_2` and `I_{p_j+2}^{e_j}` for a real potential.
pub fn fourier_invariants(spec: &ZdSpec, q: &Potential) -> Result<FourierInvariants> {
    q.check_size(spec.volume())?;
    if !q.is_real() {
        return Err(Error::ComplexPotential);
    }
    let p = spec.volume() as f64;
    let hat = dft(spec, &q.to_complex64());
    let i1 = (hat.values[0] * p).re;
    let i2 = p / 2.0 * hat.values.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let quadratic_floquet = (0..spec.dim())
        .map(|j| {
            let pj = spec.periods[j] as f64;
            let slice: f64 = (0..spec.volume())
                .filter(|&id| spec.coords(id)[j] == 0)
                .map(|id| hat.values[id].norm_sqr())
                .sum();
            i2 + p * pj / 2.0 * slice
        })
        .collect();
    Ok(FourierInvariants {
        i1,
        i2,
        quadratic_floquet,
    })
}

/// `(Σ |Q(n)|^2, p Σ |Q̂(l)|^2)`.
pub fn parseval_sides(spec: &ZdSpec, q: &[Complex64]) -> (f64, f64) {
    let hat = dft(spec, q);
    let direct = q.iter().map(|z| z.norm_sqr()).sum();
    let fourier = spec.volume() as f64 * hat.values.iter().map(|z| z.norm_sqr()).sum::<f64>();
    (direct, fourier)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{real, to_complex64};

    #[test]
    fn rejects_short_periods() {
        assert!(ZdSpec::new(vec![3, 1]).is_err());
        assert!(ZdSpec::new(vec![]).is_err());
    }

    #[test]
    fn vertex_numbering_round_trips() {
        let spec = ZdSpec::new(vec![2, 3, 4]).unwrap();
        for id in 0..spec.volume() {
            assert_eq!(spec.vertex_id(&spec.coords(id)), id);
        }
        assert_eq!(spec.coords(1), vec![1, 0, 0]);
        assert_eq!(spec.coords(2), vec![0, 1, 0]);
    }

    #[test]
    fn three_by_three_is_simple_and_four_regular() {
        let g = build_zd(&ZdSpec::new(vec![3, 3]).unwrap()).unwrap();
        assert_eq!(g.vertex_count(), 9);
        assert_eq!(g.pair_count(), 18);
        assert!(g.degrees().iter().all(|&k| k == 4));
        assert!(!g.has_multiple_edges());
        assert!(!g.has_loops());
        assert!(g.validate_full_rank().is_full());
    }

    #[test]
    fn period_two_gives_double_edges() {
        let g = build_zd(&ZdSpec::new(vec![2, 2]).unwrap()).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert!(g.has_multiple_edges());
        assert!(!g.lift_has_multiple_edges());
        assert!(g.degrees().iter().all(|&k| k == 4));

        let g = build_zd(&ZdSpec::new(vec![2]).unwrap()).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.pair_count(), 2);
        assert!(g.has_multiple_edges());
    }

    #[test]
    fn periodic_invariants_examples() {
        let spec = ZdSpec::new(vec![3, 3]).unwrap();
        let ones = Potential::from_integers(&[1; 9]);
        let [i1, i2, i3] = zd_periodic_invariants(&spec, &ones).unwrap();
        assert_eq!(i1, real(rational(9, 1)));
        assert_eq!(i2, real(rational(9, 2)));
        assert_eq!(i3, real(rational(39, 1)));
        let zero = Potential::zero(9);
        assert!(zd_periodic_invariants(&spec, &zero)
            .unwrap()
            .iter()
            .all(|v| v.is_zero()));

        let spec = ZdSpec::new(vec![2, 2]).unwrap();
        let [_, _, i3] = zd_periodic_invariants(&spec, &Potential::from_integers(&[1; 4])).unwrap();
        assert_eq!(i3, real(rational(4, 3) + rational(32, 1)));
    }

    #[test]
    fn floquet_invariants_example() {
        let spec = ZdSpec::new(vec![3, 3]).unwrap();
        let mut values = vec![0i64; 9];
        values[0] = 1;
        let q = Potential::from_integers(&values);
        let (lin, quad) = zd_floquet_invariants(&spec, &q, 0).unwrap();
        assert_eq!(lin, real(rational(1, 1)));
        assert_eq!(quad, real(rational(1, 1)));
        let [_, i2, _] = zd_periodic_invariants(&spec, &q).unwrap();
        let rs = row_sum_squares(&spec, &q, 0).unwrap();
        assert_eq!(rs * real(rational(1, 2)), quad - i2);
    }

    #[test]
    fn dft_of_constant() {
        let spec = ZdSpec::new(vec![3, 2]).unwrap();
        let q = Potential::from_real(vec![rational(5, 2); 6]);
        let hat = dft(&spec, &q.to_complex64());
        assert!((hat.values[0] - Complex64::new(2.5, 0.0)).norm() < 1e-12);
        assert!(hat.values[1..].iter().all(|z| z.norm() < 1e-12));
        let f = fourier_invariants(&spec, &q).unwrap();
        assert!((f.i1 - 15.0).abs() < 1e-12);
        assert!((f.i2 - 6.0 * 6.25 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn fourier_rejects_complex() {
        let spec = ZdSpec::new(vec![2]).unwrap();
        let q = Potential::new(vec![
            CRational::new(rational(1, 1), rational(1, 1)),
            CRational::zero(),
        ]);
        assert!(matches!(
            fourier_invariants(&spec, &q),
            Err(Error::ComplexPotential)
        ));
        let i1 = fourier_i1(&spec, &q).unwrap();
        assert!((i1 - to_complex64(q.value(0))).norm() < 1e-12);
    }

    #[test]
    fn lines_cover_the_cell() {
        let spec = ZdSpec::new(vec![3, 2]).unwrap();
        let rows = spec.lines(0);
        assert_eq!(rows, vec![vec![0, 1, 2], vec![3, 4, 5]]);
        let cols = spec.lines(1);
        assert_eq!(cols, vec![vec![0, 3], vec![1, 4], vec![2, 5]]);
    }
}
