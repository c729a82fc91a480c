//! Periodic potentials with exact complex-rational values.

use std::fmt;

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::{Complex, One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Exact complex rational `re + i im`.
pub type CRational = Complex<BigRational>;

pub fn rational(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn real(value: BigRational) -> CRational {
    Complex::new(value, BigRational::zero())
}

/// Parses `p/q`, `p` or `-p/q`.
pub fn parse_rational(token: &str) -> Option<BigRational> {
    let (num, den) = match token.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (token, None),
    };
    let numer: BigInt = num.parse().ok()?;
    let denom: BigInt = match den {
        Some(d) => d.parse().ok()?,
        None => BigInt::one(),
    };
    if denom.is_zero() || (den.is_some() && denom.is_negative()) {
        return None;
    }
    Some(BigRational::new(numer, denom))
}

pub fn rational_to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

pub fn to_complex64(value: &CRational) -> Complex64 {
    Complex64::new(rational_to_f64(&value.re), rational_to_f64(&value.im))
}

pub(crate) fn format_complex(value: &CRational) -> String {
    if value.im.is_zero() {
        value.re.to_string()
    } else if value.re.is_zero() {
        format!("{}i", value.im)
    } else if value.im.is_negative() {
        format!("{}-{}i", value.re, -value.im.clone())
    } else {
        format!("{}+{}i", value.re, value.im)
    }
}

/// A periodic potential, given by its values on the fundamental vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Potential {
    values: Vec<CRational>,
}

impl Potential {
    pub fn zero(vertex_count: usize) -> Self {
        Potential {
            values: vec![CRational::zero(); vertex_count],
        }
    }

    pub fn new(values: Vec<CRational>) -> Self {
        Potential { values }
    }

    pub fn from_real(values: impl IntoIterator<Item = BigRational>) -> Self {
        Potential {
            values: values.into_iter().map(real).collect(),
        }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Self::from_real(values.iter().map(|&v| rational(v, 1)))
    }

    /// Seeded random potential with values `a/b`, `|a/b| <= bound`, `1 <= b <= max_denom`.
    pub fn random<R: Rng>(
        rng: &mut R,
        vertex_count: usize,
        bound: i64,
        max_denom: i64,
        complex: bool,
    ) -> Self {
        let draw = |rng: &mut R| {
            let den = rng.gen_range(1..=max_denom);
            let num = rng.gen_range(-bound * den..=bound * den);
            rational(num, den)
        };
        let values = (0..vertex_count)
            .map(|_| {
                let re = draw(rng);
                let im = if complex {
                    draw(rng)
                } else {
                    BigRational::zero()
                };
                Complex::new(re, im)
            })
            .collect();
        Potential { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[CRational] {
        &self.values
    }

    pub fn value(&self, vertex: usize) -> &CRational {
        &self.values[vertex]
    }

    pub fn set(&mut self, vertex: usize, value: CRational) {
        self.values[vertex] = value;
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn to_complex64(&self) -> Vec<Complex64> {
        self.values.iter().map(to_complex64).collect()
    }

    pub fn check_size(&self, vertex_count: usize) -> Result<()> {
        if self.values.len() != vertex_count {
            return Err(Error::PotentialSize {
                expected: vertex_count,
                found: self.values.len(),
            });
        }
        Ok(())
    }

    /// Parses a potential-only file: a `vertices N` header and `potential` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let file = crate::graph::parse_document(text, false)?;
        let count = file
            .vertices
            .ok_or_else(|| Error::syntax(1, 1, "missing `vertices` line"))?;
        Ok(file.potential.unwrap_or_else(|| Potential::zero(count)))
    }

    /// Serializes as a potential-only file.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("vertices {}\n", self.values.len());
        out.push_str(&self.potential_lines());
        out
    }

    pub(crate) fn potential_lines(&self) -> String {
        let mut out = String::new();
        for (v, value) in self.values.iter().enumerate() {
            if value.is_zero() {
                continue;
            }
            if value.im.is_zero() {
                out.push_str(&format!("potential {} {}\n", v, value.re));
            } else {
                out.push_str(&format!("potential {} {} {}\n", v, value.re, value.im));
            }
        }
        out
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_complex(v))?;
        }
        write!(f, ")")
    }
}
