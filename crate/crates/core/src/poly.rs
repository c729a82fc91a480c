//! Sparse multivariate polynomials in the potential values `q_0..q_{ν-1}`
//! with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num::complex::Complex64;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::potential::{rational_to_f64, CRational, Potential};

/// Dense exponent vector, one entry per vertex.
///
/// Ordered graded-lexicographically with larger terms first: higher total
/// degree, then larger exponent of `q_0`, then `q_1`, and so on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, Default)]
pub struct PotentialPolynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

// Exponent vectors already carry the arity, so only the zero polynomial can
// differ in `nvars`; it compares equal to every other zero.
impl PartialEq for PotentialPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for PotentialPolynomial {}

/// JSON form of one term: `{"coeff": "a/b", "exps": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub exps: Vec<u32>,
}

impl PotentialPolynomial {
    pub fn zero(nvars: usize) -> Self {
        PotentialPolynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, value: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], value);
        p
    }

    /// The polynomial `q_vertex`.
    pub fn variable(nvars: usize, vertex: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[vertex] = 1;
        Self::monomial(exps, BigRational::one())
    }

    pub fn monomial(exps: Vec<u32>, coeff: BigRational) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, coeff);
        p
    }

    /// `sum_v c_v q_v^power`.
    pub fn power_sum(nvars: usize, power: u32, coeff: &BigRational) -> Self {
        let mut p = Self::zero(nvars);
        for v in 0..nvars {
            let mut exps = vec![0; nvars];
            exps[v] = power;
            p.add_term(exps, coeff.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(m, c)| (m.exponents(), c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigRational {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, coeff: BigRational) {
        if self.terms.is_empty() && self.nvars != exps.len() {
            self.nvars = exps.len();
        }
        assert_eq!(exps.len(), self.nvars, "monomial arity mismatch");
        if coeff.is_zero() {
            return;
        }
        let key = Monomial(exps);
        let slot = self
            .terms
            .entry(key.clone())
            .or_insert_with(BigRational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        if factor.is_zero() {
            return Self::zero(self.nvars);
        }
        PotentialPolynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, BigRational::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact substitution of the potential values.
    pub fn evaluate(&self, q: &Potential) -> CRational {
        assert!(q.len() >= self.nvars, "potential too short");
        let mut powers: Vec<Vec<CRational>> = vec![vec![CRational::one()]; self.nvars];
        let mut total = CRational::zero();
        for (m, c) in &self.terms {
            let mut term = CRational::new(c.clone(), BigRational::zero());
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[v];
                while table.len() <= e as usize {
                    let next = table.last().unwrap() * q.value(v);
                    table.push(next);
                }
                term *= &table[e as usize];
            }
            total += term;
        }
        total
    }

    pub fn evaluate_f64(&self, q: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter()
                    .enumerate()
                    .fold(Complex64::new(rational_to_f64(c), 0.0), |acc, (v, &e)| {
                        acc * q[v].powu(e)
                    })
            })
            .sum()
    }

    pub fn to_json_terms(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(m, c)| TermJson {
                coeff: c.to_string(),
                exps: m.0.clone(),
            })
            .collect()
    }

    pub fn from_json_terms(nvars: usize, terms: &[TermJson]) -> Option<Self> {
        let mut p = Self::zero(nvars);
        for t in terms {
            if t.exps.len() != nvars {
                return None;
            }
            p.add_term(t.exps.clone(), crate::potential::parse_rational(&t.coeff)?);
        }
        Some(p)
    }

    fn arity(&self, other: &Self) -> usize {
        if self.is_zero() {
            other.nvars.max(self.nvars)
        } else if other.is_zero() {
            self.nvars
        } else {
            assert_eq!(
                self.nvars, other.nvars,
                "polynomials over different variable sets"
            );
            self.nvars
        }
    }
}

impl fmt::Display for PotentialPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(v, &e)| {
                        if e == 1 {
                            format!("q{}", v)
                        } else {
                            format!("q{}^{}", v, e)
                        }
                    })
                    .collect();
            if vars.is_empty() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Add<&PotentialPolynomial> for &PotentialPolynomial {
    type Output = PotentialPolynomial;
    fn add(self, rhs: &PotentialPolynomial) -> PotentialPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for PotentialPolynomial {
    type Output = PotentialPolynomial;
    fn add(mut self, rhs: PotentialPolynomial) -> PotentialPolynomial {
        self += &rhs;
        self
    }
}

impl AddAssign<&PotentialPolynomial> for PotentialPolynomial {
    fn add_assign(&mut self, rhs: &PotentialPolynomial) {
        self.nvars = self.arity(rhs);
        for (m, c) in &rhs.terms {
            self.add_term(m.0.clone(), c.clone());
        }
    }
}

impl Neg for &PotentialPolynomial {
    type Output = PotentialPolynomial;
    fn neg(self) -> PotentialPolynomial {
        PotentialPolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Sub<&PotentialPolynomial> for &PotentialPolynomial {
    type Output = PotentialPolynomial;
    fn sub(self, rhs: &PotentialPolynomial) -> PotentialPolynomial {
        self + &(-rhs)
    }
}

impl Mul<&PotentialPolynomial> for &PotentialPolynomial {
    type Output = PotentialPolynomial;
    // Exponents add when monomials multiply.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &PotentialPolynomial) -> PotentialPolynomial {
        let nvars = self.arity(rhs);
        let mut out = PotentialPolynomial::zero(nvars);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let exps = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }
}

impl Mul for PotentialPolynomial {
    type Output = PotentialPolynomial;
    fn mul(self, rhs: PotentialPolynomial) -> PotentialPolynomial {
        &self * &rhs
    }
}

impl Zero for PotentialPolynomial {
    fn zero() -> Self {
        PotentialPolynomial::zero(0)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Sum for PotentialPolynomial {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(<Self as Zero>::zero(), |acc, p| acc + p)
    }
}
