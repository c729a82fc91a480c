//! Example periodic graphs.
//!
//! Vertex numbering:
//! - `cycle ν`: vertices `0..ν` around the ring; the edge `ν-1 -> 0` carries
//!   index `1`, every other edge index `0`.
//! - `pendant`: `0` is the lattice vertex carrying the `±1` loop, `1` the
//!   pendant vertex.
//! - `kagome`: `v1, v2, v3` map to `0, 1, 2`; edges are declared in the
//!   order `e1..e6` with `τ(e2) = (1,0)`, `τ(e4) = (0,1)`, `τ(e6) = (1,-1)`.
//! - `zd p1,...,pd`: see [`crate::lattice`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{EdgeDecl, FundamentalGraph};
use crate::lattice::ZdSpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    Cycle(usize),
    Pendant,
    Kagome,
    Zd(Vec<usize>),
}

impl Builtin {
    pub fn build(&self) -> Result<FundamentalGraph> {
        match self {
            Builtin::Cycle(nu) => cycle(*nu),
            Builtin::Pendant => Ok(pendant()),
            Builtin::Kagome => Ok(kagome()),
            Builtin::Zd(periods) => zd(periods),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Cycle(nu) => write!(f, "cycle {}", nu),
            Builtin::Pendant => write!(f, "pendant"),
            Builtin::Kagome => write!(f, "kagome"),
            Builtin::Zd(p) => {
                let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                write!(f, "zd {}", parts.join(","))
            }
        }
    }
}

/// Accepts `cycle 5`, `cycle:5`, `pendant`, `kagome`, `zd 3,3`, `zd:3,3`.
impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidBuiltin(s.to_string());
        let mut parts = s.trim().splitn(2, |c: char| c == ':' || c.is_whitespace());
        let name = parts.next().ok_or_else(bad)?;
        let arg = parts.next().map(str::trim).filter(|a| !a.is_empty());
        match (name, arg) {
            ("pendant", None) => Ok(Builtin::Pendant),
            ("kagome", None) => Ok(Builtin::Kagome),
            ("cycle", Some(a)) => a.parse().map(Builtin::Cycle).map_err(|_| bad()),
            ("zd", Some(a)) => a
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(Builtin::Zd)
                .map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

/// `Z/νZ`: the fundamental graph of the one-dimensional lattice with period `ν`.
pub fn cycle(nu: usize) -> Result<FundamentalGraph> {
    if nu == 0 {
        return Err(Error::InvalidBuiltin("cycle 0".into()));
    }
    let edges = (0..nu)
        .map(|i| EdgeDecl::new(i, (i + 1) % nu, vec![(i + 1 == nu) as i64]))
        .collect();
    FundamentalGraph::new(1, nu, edges)
}

/// The lattice `Z` with a pendant edge attached at every vertex.
pub fn pendant() -> FundamentalGraph {
    FundamentalGraph::new(
        1,
        2,
        vec![EdgeDecl::new(0, 1, vec![0]), EdgeDecl::new(0, 0, vec![1])],
    )
    .expect("pendant graph is valid")
}

pub fn kagome() -> FundamentalGraph {
    let mut g = FundamentalGraph::new(
        2,
        3,
        vec![
            EdgeDecl::new(0, 1, vec![0, 0]),
            EdgeDecl::new(1, 0, vec![1, 0]),
            EdgeDecl::new(0, 2, vec![0, 0]),
            EdgeDecl::new(2, 0, vec![0, 1]),
            EdgeDecl::new(2, 1, vec![0, 0]),
            EdgeDecl::new(1, 2, vec![1, -1]),
        ],
    )
    .expect("kagome graph is valid");
    for v in 0..3 {
        g.set_name(v, format!("v{}", v + 1));
    }
    g
}

pub fn zd(periods: &[usize]) -> Result<FundamentalGraph> {
    crate::lattice::build_zd(&ZdSpec::new(periods.to_vec())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_names() {
        assert_eq!("cycle 5".parse::<Builtin>().unwrap(), Builtin::Cycle(5));
        assert_eq!("cycle:5".parse::<Builtin>().unwrap(), Builtin::Cycle(5));
        assert_eq!(
            "zd 3,3".parse::<Builtin>().unwrap(),
            Builtin::Zd(vec![3, 3])
        );
        assert_eq!("kagome".parse::<Builtin>().unwrap(), Builtin::Kagome);
        assert!("kagome 3".parse::<Builtin>().is_err());
        assert!("zd".parse::<Builtin>().is_err());
        assert!("torus".parse::<Builtin>().is_err());
        for b in [Builtin::Cycle(3), Builtin::Pendant, Builtin::Zd(vec![2, 3])] {
            assert_eq!(b.to_string().parse::<Builtin>().unwrap(), b);
        }
    }

    #[test]
    fn cycle_five() {
        let g = cycle(5).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.pair_count(), 5);
        let wraps: Vec<_> = g
            .edges()
            .iter()
            .step_by(2)
            .filter(|e| e.index[0] != 0)
            .collect();
        assert_eq!(wraps.len(), 1);
        assert_eq!(wraps[0].index, vec![1]);
    }

    #[test]
    fn pendant_degrees() {
        assert_eq!(pendant().degrees(), vec![3, 1]);
    }

    #[test]
    fn kagome_counts() {
        let g = kagome();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.pair_count(), 6);
        assert_eq!(g.edges().len(), 12);
        assert_eq!(g.degrees(), vec![4, 4, 4]);
        assert!(!g.has_loops());
        // e1 and e2 both join v1 and v2 in the quotient, but not in the lattice.
        assert!(g.has_multiple_edges());
        assert!(!g.lift_has_multiple_edges());
        assert!(g.validate_full_rank().is_full());
        let m = g.modified();
        assert_eq!(m.edge_count(), 15);
    }

    #[test]
    fn builtins_round_trip_through_file_format() {
        for b in [
            Builtin::Cycle(4),
            Builtin::Pendant,
            Builtin::Kagome,
            Builtin::Zd(vec![2, 3]),
        ] {
            let g = b.build().unwrap();
            let text = g.to_file_string(None);
            assert_eq!(FundamentalGraph::parse(&text).unwrap(), g, "{b}");
        }
    }
}
