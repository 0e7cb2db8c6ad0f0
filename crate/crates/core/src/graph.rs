//! Simple graphs on `0..n` and strongly regular parameter checks.

use serde::{Deserialize, Serialize};

use crate::incidence::IncidenceStructure;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrgParams {
    pub v: usize,
    pub k: usize,
    pub lambda: usize,
    pub mu: usize,
}

impl SrgParams {
    /// `k (k - lambda - 1) = (v - k - 1) mu`.
    pub fn feasible(&self) -> bool {
        self.k * self.k.saturating_sub(self.lambda + 1) == self.v.saturating_sub(self.k + 1) * self.mu
    }

    /// Parameters of the concurrency graph of a hemisystem of a GQ of
    /// order `(q^2, q)`.
    pub fn hemisystem(q: usize) -> SrgParams {
        SrgParams {
            v: (q * q * q + 1) * (q + 1) / 2,
            k: (q * q + 1) * (q - 1) / 2,
            lambda: (q - 3) / 2,
            mu: (q - 1) * (q - 1) / 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrgFailure {
    pub reason: String,
    pub witness: Option<(u32, u32)>,
}

impl Graph {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Graph {
        let mut adj = vec![Vec::new(); n];
        for (a, b) in edges {
            if a != b {
                adj[a as usize].push(b);
                adj[b as usize].push(a);
            }
        }
        for l in adj.iter_mut() {
            l.sort_unstable();
            l.dedup();
        }
        Graph { adj }
    }

    /// Vertices are the given lines; two are adjacent when they share a point.
    pub fn concurrency(inc: &IncidenceStructure, lines: &[u32]) -> Graph {
        let mut pos = vec![u32::MAX; inc.num_lines()];
        for (i, &l) in lines.iter().enumerate() {
            pos[l as usize] = i as u32;
        }
        let mut edges = Vec::new();
        for p in 0..inc.num_points() {
            let through: Vec<u32> =
                inc.lines_through(p).iter().map(|&l| pos[l as usize]).filter(|&v| v != u32::MAX).collect();
            for (i, &a) in through.iter().enumerate() {
                for &b in &through[i + 1..] {
                    edges.push((a, b));
                }
            }
        }
        Graph::from_edges(lines.len(), edges)
    }

    /// Vertices are the given points; two are adjacent when collinear.
    pub fn collinearity(inc: &IncidenceStructure, points: &[u32]) -> Graph {
        Graph::concurrency(&inc.dual(), points)
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    /// Direct count of degrees and common neighbours over all pairs.
    pub fn srg_check(&self) -> Result<SrgParams, SrgFailure> {
        let n = self.adj.len();
        if n < 2 {
            return Err(SrgFailure { reason: "fewer than two vertices".into(), witness: None });
        }
        let k = self.adj[0].len();
        if let Some(v) = (0..n).find(|&v| self.adj[v].len() != k) {
            return Err(SrgFailure {
                reason: format!("vertex {v} has degree {}, vertex 0 has {k}", self.adj[v].len()),
                witness: Some((0, v as u32)),
            });
        }
        let words = n.div_ceil(64);
        let bits: Vec<Vec<u64>> = self
            .adj
            .iter()
            .map(|l| {
                let mut b = vec![0u64; words];
                for &x in l {
                    b[x as usize / 64] |= 1 << (x % 64);
                }
                b
            })
            .collect();
        let (mut lambda, mut mu) = (None::<usize>, None::<usize>);
        for a in 0..n {
            for b in a + 1..n {
                let common: usize = bits[a].iter().zip(&bits[b]).map(|(x, y)| (x & y).count_ones() as usize).sum();
                let adjacent = bits[a][b / 64] >> (b % 64) & 1 == 1;
                let slot = if adjacent { &mut lambda } else { &mut mu };
                match *slot {
                    None => *slot = Some(common),
                    Some(c) if c == common => {}
                    Some(c) => {
                        return Err(SrgFailure {
                            reason: format!(
                                "{} pair ({a},{b}) has {common} common neighbours, expected {c}",
                                if adjacent { "adjacent" } else { "non-adjacent" }
                            ),
                            witness: Some((a as u32, b as u32)),
                        })
                    }
                }
            }
        }
        Ok(SrgParams { v: n, k, lambda: lambda.unwrap_or(0), mu: mu.unwrap_or(0) })
    }

    /// DIMACS edge format, 1-based.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p edge {} {}\n", self.num_vertices(), self.num_edges());
        for (a, l) in self.adj.iter().enumerate() {
            for &b in l.iter().filter(|&&b| b as usize > a) {
                out.push_str(&format!("e {} {}\n", a + 1, b + 1));
            }
        }
        out
    }

    /// One line per vertex: `v: n1 n2 ...`, 0-based.
    pub fn to_adjacency_list(&self) -> String {
        let mut out = String::new();
        for (a, l) in self.adj.iter().enumerate() {
            out.push_str(&a.to_string());
            out.push(':');
            for b in l {
                out.push(' ');
                out.push_str(&b.to_string());
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn petersen() -> Graph {
        let mut e = Vec::new();
        for i in 0..5u32 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::from_edges(10, e)
    }

    #[test]
    fn petersen_is_srg() {
        let p = petersen().srg_check().unwrap();
        assert_eq!(p, SrgParams { v: 10, k: 3, lambda: 0, mu: 1 });
        assert!(p.feasible());
    }

    #[test]
    fn path_is_not() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]);
        assert!(g.srg_check().is_err());
    }

    #[test]
    fn hemisystem_parameters() {
        assert_eq!(SrgParams::hemisystem(3), SrgParams { v: 56, k: 10, lambda: 0, mu: 2 });
        assert!(SrgParams::hemisystem(5).feasible());
        assert!(SrgParams::hemisystem(7).feasible());
    }

    #[test]
    fn dimacs_header() {
        let d = petersen().to_dimacs();
        assert!(d.starts_with("p edge 10 15\n"));
        assert_eq!(d.lines().count(), 16);
    }
}
