//! Finite point-line incidence structures and generalized quadrangle checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Points `0..n_points`, lines as point lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceStructure {
    line_points: Vec<Vec<u32>>,
    point_lines: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GqReport {
    /// `(s, t)` when line sizes and point degrees are constant.
    pub order: Option<(usize, usize)>,
    pub axiom_holds: bool,
    /// First failure found, if any.
    pub witness: Option<String>,
    /// Number of non-incident pairs examined (all of them when exhaustive).
    pub pairs_checked: u64,
}

impl IncidenceStructure {
    pub fn new(n_points: usize, mut line_points: Vec<Vec<u32>>) -> Self {
        let mut point_lines = vec![Vec::new(); n_points];
        for (j, pts) in line_points.iter_mut().enumerate() {
            pts.sort_unstable();
            for &p in pts.iter() {
                point_lines[p as usize].push(j as u32);
            }
        }
        IncidenceStructure { line_points, point_lines }
    }

    pub fn num_points(&self) -> usize {
        self.point_lines.len()
    }

    pub fn num_lines(&self) -> usize {
        self.line_points.len()
    }

    pub fn points_on(&self, line: usize) -> &[u32] {
        &self.line_points[line]
    }

    pub fn lines_through(&self, point: usize) -> &[u32] {
        &self.point_lines[point]
    }

    pub fn is_incident(&self, point: usize, line: usize) -> bool {
        self.line_points[line].binary_search(&(point as u32)).is_ok()
    }

    /// The point-line dual.
    pub fn dual(&self) -> IncidenceStructure {
        IncidenceStructure {
            line_points: self.point_lines.clone(),
            point_lines: self.line_points.clone(),
        }
    }

    /// A copy with the given line removed (used to build defective examples).
    pub fn without_line(&self, line: usize) -> IncidenceStructure {
        let mut lines = self.line_points.clone();
        lines.remove(line);
        IncidenceStructure::new(self.num_points(), lines)
    }

    fn uniform_order(&self) -> Result<(usize, usize), String> {
        let s1 = self.line_points.first().map_or(0, Vec::len);
        if let Some(j) = self.line_points.iter().position(|l| l.len() != s1) {
            return Err(format!("line {j} has {} points, line 0 has {s1}", self.line_points[j].len()));
        }
        let t1 = self.point_lines.first().map_or(0, Vec::len);
        if let Some(i) = self.point_lines.iter().position(|l| l.len() != t1) {
            return Err(format!("point {i} is on {} lines, point 0 on {t1}", self.point_lines[i].len()));
        }
        if s1 < 2 || t1 < 1 {
            return Err("degenerate structure".into());
        }
        Ok((s1 - 1, t1 - 1))
    }

    /// Exhaustive generalized quadrangle check.
    ///
    /// For every point `x`, every line not through `x` must contain exactly one
    /// point collinear with `x`. We mark, for each point `y` collinear with `x`,
    /// the lines through `y` other than `xy`; no line may be marked twice and
    /// every line not through `x` must end up marked.
    pub fn verify_gq(&self) -> GqReport {
        let order = match self.uniform_order() {
            Ok(o) => o,
            Err(w) => return GqReport { order: None, axiom_holds: false, witness: Some(w), pairs_checked: 0 },
        };
        let nl = self.num_lines();
        let mut mark = vec![u32::MAX; nl];
        let mut seen = vec![u32::MAX; self.num_points()];
        let mut pairs = 0u64;
        for x in 0..self.num_points() {
            let stamp = x as u32;
            for &l in &self.point_lines[x] {
                mark[l as usize] = stamp;
            }
            seen[x] = stamp;
            for &l in &self.point_lines[x] {
                for &y in &self.line_points[l as usize] {
                    if y as usize == x {
                        continue;
                    }
                    if seen[y as usize] == stamp {
                        return self.fail(order, pairs, format!("points {x} and {y} lie on two common lines"));
                    }
                    seen[y as usize] = stamp;
                    for &m in &self.point_lines[y as usize] {
                        if m == l {
                            continue;
                        }
                        if mark[m as usize] == stamp {
                            return self.fail(
                                order,
                                pairs,
                                format!("point {x} and line {m}: more than one transversal (triangle through {y})"),
                            );
                        }
                        mark[m as usize] = stamp;
                        pairs += 1;
                    }
                }
            }
            if let Some(m) = (0..nl).find(|&m| mark[m] != stamp) {
                return self.fail(order, pairs, format!("point {x} and line {m}: no transversal"));
            }
        }
        GqReport { order: Some(order), axiom_holds: true, witness: None, pairs_checked: pairs }
    }

    fn fail(&self, order: (usize, usize), pairs: u64, w: String) -> GqReport {
        GqReport { order: Some(order), axiom_holds: false, witness: Some(w), pairs_checked: pairs }
    }

    /// Number of lines through `x` meeting `m`, for a non-incident pair.
    pub fn transversals(&self, x: usize, m: usize) -> usize {
        self.point_lines[x]
            .iter()
            .filter(|&&l| {
                let a = &self.line_points[l as usize];
                self.line_points[m].iter().any(|p| a.binary_search(p).is_ok())
            })
            .count()
    }

    /// Size/degree invariants exhaustively, the transversal axiom on `samples`
    /// random non-incident pairs drawn from a fixed seed.
    pub fn verify_gq_sampled(&self, samples: u64, seed: u64) -> GqReport {
        let order = match self.uniform_order() {
            Ok(o) => o,
            Err(w) => return GqReport { order: None, axiom_holds: false, witness: Some(w), pairs_checked: 0 },
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut checked = 0;
        while checked < samples {
            let x = rng.gen_range(0..self.num_points());
            let m = rng.gen_range(0..self.num_lines());
            if self.is_incident(x, m) {
                continue;
            }
            checked += 1;
            let t = self.transversals(x, m);
            if t != 1 {
                return self.fail(order, checked, format!("point {x} and line {m}: {t} transversals"));
            }
        }
        GqReport { order: Some(order), axiom_holds: true, witness: None, pairs_checked: checked }
    }

    /// Sparse point-line incidence matrix in MatrixMarket coordinate format
    /// (rows are points, columns lines, 1-based).
    pub fn to_matrix_market(&self) -> String {
        let nnz: usize = self.line_points.iter().map(Vec::len).sum();
        let mut out = String::with_capacity(nnz * 12 + 64);
        out.push_str("%%MatrixMarket matrix coordinate pattern general\n");
        out.push_str(&format!("{} {} {}\n", self.num_points(), self.num_lines(), nnz));
        for (p, lines) in self.point_lines.iter().enumerate() {
            for &l in lines {
                out.push_str(&format!("{} {}\n", p + 1, l + 1));
            }
        }
        out
    }

    /// `A h` for a 0/1 line indicator given as a sorted line set.
    pub fn point_counts(&self, lines: &[u32]) -> Vec<u32> {
        let mut c = vec![0u32; self.num_points()];
        for &l in lines {
            for &p in &self.line_points[l as usize] {
                c[p as usize] += 1;
            }
        }
        c
    }
}
