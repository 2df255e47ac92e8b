//! Reproducible graph generators.
//!
//! Textual descriptors (see [`GraphSpec`]'s `FromStr`):
//!
//! ```text
//! path:8   star:8   clique:16   grid:64   grid:4x8
//! er:64:0.2        erdos_renyi:64:0.2
//! rgg:64:0.25      random_geometric:64:0.25
//! ```
//!
//! Optional suffixes: `:w=LO-HI` draws weights uniformly from `LO..=HI`,
//! `:z=P` makes each edge zero-weight with probability `P`.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, GraphBuilder, Weight};
use crate::rng::{derive_seed, node_rng, tag};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Topology {
    Path { n: usize },
    Star { n: usize },
    Clique { n: usize },
    Grid { rows: usize, cols: usize },
    ErdosRenyi { n: usize, p: f64 },
    RandomGeometric { n: usize, radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum WeightRange {
    Unit,
    Uniform { lo: Weight, hi: Weight },
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GraphSpec {
    pub topology: Topology,
    pub weights: WeightRange,
    /// Probability that an edge gets weight 0.
    pub zero_prob: f64,
}

impl GraphSpec {
    pub fn new(topology: Topology) -> Self {
        Self {
            topology,
            weights: WeightRange::Unit,
            zero_prob: 0.0,
        }
    }

    pub fn weights(mut self, weights: WeightRange) -> Self {
        self.weights = weights;
        self
    }

    pub fn zero_prob(mut self, p: f64) -> Self {
        self.zero_prob = p;
        self
    }

    pub fn n(&self) -> usize {
        match self.topology {
            Topology::Path { n }
            | Topology::Star { n }
            | Topology::Clique { n }
            | Topology::ErdosRenyi { n, .. }
            | Topology::RandomGeometric { n, .. } => n,
            Topology::Grid { rows, cols } => rows * cols,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSpec(m.to_string()));
        if self.n() == 0 {
            return bad("graph must have at least one node");
        }
        match self.topology {
            Topology::ErdosRenyi { p, .. } if !(0.0..=1.0).contains(&p) => {
                return bad("edge probability must lie in [0, 1]")
            }
            Topology::RandomGeometric { radius, .. } if radius.is_nan() || radius < 0.0 => {
                return bad("radius must be nonnegative")
            }
            _ => {}
        }
        if let WeightRange::Uniform { lo, hi } = self.weights {
            if lo > hi {
                return bad("weight range is empty");
            }
        }
        if !(0.0..=1.0).contains(&self.zero_prob) {
            return bad("zero-weight probability must lie in [0, 1]");
        }
        Ok(())
    }
}

/// Generates the graph described by `spec`; deterministic in `(spec, seed)`.
pub fn gen_graph(spec: &GraphSpec, seed: u64) -> Result<Graph> {
    spec.validate()?;
    let n = spec.n();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    match spec.topology {
        Topology::Path { .. } => pairs.extend((1..n).map(|i| (i - 1, i))),
        Topology::Star { .. } => pairs.extend((1..n).map(|i| (0, i))),
        Topology::Clique { .. } => {
            for u in 0..n {
                pairs.extend((u + 1..n).map(|v| (u, v)));
            }
        }
        Topology::Grid { rows, cols } => {
            for r in 0..rows {
                for c in 0..cols {
                    let u = r * cols + c;
                    if c + 1 < cols {
                        pairs.push((u, u + 1));
                    }
                    if r + 1 < rows {
                        pairs.push((u, u + cols));
                    }
                }
            }
        }
        Topology::ErdosRenyi { p, .. } => {
            let s = derive_seed(seed, 1);
            for u in 0..n {
                let mut rng = node_rng(s, tag::GENERATOR, u);
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        pairs.push((u, v));
                    }
                }
            }
        }
        Topology::RandomGeometric { radius, .. } => {
            let s = derive_seed(seed, 2);
            let points: Vec<(f64, f64)> = (0..n)
                .map(|u| {
                    let mut rng = node_rng(s, tag::GENERATOR, u);
                    (rng.gen::<f64>(), rng.gen::<f64>())
                })
                .collect();
            let r2 = radius * radius;
            for u in 0..n {
                for v in u + 1..n {
                    let dx = points[u].0 - points[v].0;
                    let dy = points[u].1 - points[v].1;
                    if dx * dx + dy * dy <= r2 {
                        pairs.push((u, v));
                    }
                }
            }
        }
    }
    let s = derive_seed(seed, 3);
    let mut last_u = usize::MAX;
    let mut rng = node_rng(s, tag::GENERATOR, 0);
    let edges = pairs.into_iter().map(|(u, v)| {
        if u != last_u {
            rng = node_rng(s, tag::GENERATOR, u);
            last_u = u;
        }
        let mut w = match spec.weights {
            WeightRange::Unit => 1,
            WeightRange::Uniform { lo, hi } => rng.gen_range(lo..=hi),
        };
        if spec.zero_prob > 0.0 && rng.gen_bool(spec.zero_prob) {
            w = 0;
        }
        Edge::new(u, v, w)
    });
    GraphBuilder::new(n).edges(edges).build()
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSpec(format!("cannot parse generator descriptor {s:?}"));
        let mut parts = s.split(':');
        let kind = parts.next().ok_or_else(bad)?;
        let mut positional: Vec<&str> = Vec::new();
        let mut weights = WeightRange::Unit;
        let mut zero_prob = 0.0;
        for p in parts {
            if let Some(range) = p.strip_prefix("w=") {
                let (lo, hi) = range.split_once('-').ok_or_else(bad)?;
                weights = WeightRange::Uniform {
                    lo: lo.parse().map_err(|_| bad())?,
                    hi: hi.parse().map_err(|_| bad())?,
                };
            } else if let Some(z) = p.strip_prefix("z=") {
                zero_prob = z.parse().map_err(|_| bad())?;
            } else {
                positional.push(p);
            }
        }
        let int = |i: usize| -> Result<usize> {
            positional.get(i).ok_or_else(bad)?.parse().map_err(|_| bad())
        };
        let real = |i: usize| -> Result<f64> {
            positional.get(i).ok_or_else(bad)?.parse().map_err(|_| bad())
        };
        let topology = match kind {
            "path" => Topology::Path { n: int(0)? },
            "star" => Topology::Star { n: int(0)? },
            "clique" => Topology::Clique { n: int(0)? },
            "grid" => {
                let dims = positional.first().ok_or_else(bad)?;
                match dims.split_once('x') {
                    Some((r, c)) => Topology::Grid {
                        rows: r.parse().map_err(|_| bad())?,
                        cols: c.parse().map_err(|_| bad())?,
                    },
                    None => {
                        let n = int(0)?;
                        let rows = near_square_rows(n);
                        Topology::Grid {
                            rows,
                            cols: n / rows,
                        }
                    }
                }
            }
            "er" | "erdos_renyi" => Topology::ErdosRenyi {
                n: int(0)?,
                p: real(1)?,
            },
            "rgg" | "random_geometric" => Topology::RandomGeometric {
                n: int(0)?,
                radius: real(1)?,
            },
            _ => return Err(bad()),
        };
        let spec = GraphSpec {
            topology,
            weights,
            zero_prob,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Largest divisor of `n` not exceeding `sqrt(n)`.
fn near_square_rows(n: usize) -> usize {
    let mut best = 1;
    let mut r = 1;
    while r * r <= n {
        if n.is_multiple_of(r) {
            best = r;
        }
        r += 1;
    }
    best
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.topology {
            Topology::Path { n } => write!(f, "path:{n}")?,
            Topology::Star { n } => write!(f, "star:{n}")?,
            Topology::Clique { n } => write!(f, "clique:{n}")?,
            Topology::Grid { rows, cols } => write!(f, "grid:{rows}x{cols}")?,
            Topology::ErdosRenyi { n, p } => write!(f, "er:{n}:{p}")?,
            Topology::RandomGeometric { n, radius } => write!(f, "rgg:{n}:{radius}")?,
        }
        if let WeightRange::Uniform { lo, hi } = self.weights {
            write!(f, ":w={lo}-{hi}")?;
        }
        if self.zero_prob > 0.0 {
            write!(f, ":z={}", self.zero_prob)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_displays() {
        let s: GraphSpec = "er:64:0.2:w=1-100".parse().unwrap();
        assert_eq!(s.to_string(), "er:64:0.2:w=1-100");
        let g: GraphSpec = "grid:32".parse().unwrap();
        assert_eq!(g.topology, Topology::Grid { rows: 4, cols: 8 });
        assert!("er:64:1.5".parse::<GraphSpec>().is_err());
        assert!("blob:3".parse::<GraphSpec>().is_err());
        assert!("path:4:w=5-1".parse::<GraphSpec>().is_err());
    }

    #[test]
    fn path_has_unit_edges() {
        let g = gen_graph(&"path:4".parse().unwrap(), 9).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert!(g.edges().iter().all(|e| e.w == 1));
    }

    #[test]
    fn deterministic() {
        let spec: GraphSpec = "er:16:0.5:w=1-50".parse().unwrap();
        assert_eq!(gen_graph(&spec, 3).unwrap(), gen_graph(&spec, 3).unwrap());
        assert_ne!(gen_graph(&spec, 3).unwrap(), gen_graph(&spec, 4).unwrap());
    }
}
