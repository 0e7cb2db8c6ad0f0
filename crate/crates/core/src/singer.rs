//! Point-hemisystems of the elliptic quadric Q^-(5,q) on GF(q^6) that are
//! invariant under a Singer-type cyclic isometry of order `q^2 - q + 1`.
//!
//! A singular point `<u>` with `r = u^(q^2-q+1)` carries the label
//! `(a, n) = (r^(q^2-1), r^(q^3-1))`: `a` is a zero of `X^(q+1) + X + 1` and
//! `n^(q+1) = 1`. Both are unchanged by scaling `u` with GF(q)^*, and the
//! label classes are exactly the orbits of `K = <xi^((q^3-1)(q+1))>`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{config_err, Error, Result};
use crate::field::{prime_power, Elem, Field, WireElem};
use crate::graph::Graph;
use crate::linspaces::{normalize, parse_elem, HermitianTraceQuadric, Matrix, PointLineGeometry, Subspace};
use crate::typeone::{Hemisystem, Provenance};

/// A GF(q^2)-irreducible factor of `X^(q+1) + X + 1`, as its zero set.
#[derive(Clone, Debug)]
pub struct Factor {
    /// Zeros in GF(q^6), closed under `a -> a^(q^2)`.
    pub roots: Vec<Elem>,
    /// Monic coefficients in GF(q^2), constant term first.
    pub coeffs: Vec<Elem>,
}

pub struct SingerFrame {
    pub q: u32,
    pub quadric: HermitianTraceQuadric,
    pub geometry: PointLineGeometry,
    pub gf2: Field,
    pub factors: Vec<Factor>,
    /// Logs (base the primitive element z of GF(q^2)) of `N`, ascending.
    pub n_logs: Vec<u32>,
    /// Per singular point: factor index and log of `n` in GF(q^2).
    pub labels: Vec<(u16, u32)>,
    /// Per singular point: the zero `a` itself.
    pub a_labels: Vec<Elem>,
    /// Points per label class, in order of least member.
    pub k_orbits: Vec<Vec<u32>>,
    line_index: HashMap<Subspace, u32>,
}

impl SingerFrame {
    pub fn new(q: u32) -> Result<SingerFrame> {
        let (p, e) = prime_power(q).ok_or_else(|| config_err!("{q} is not a prime power"))?;
        if p == 2 {
            return Err(config_err!("q must be odd"));
        }
        let quadric = HermitianTraceQuadric::new(q)?;
        let geometry = quadric.geometry()?;
        let gf2 = Field::new(p, 2 * e)?;
        let big = quadric.ext.big();
        let qq = q as u64;

        let poly = {
            let mut c = vec![Elem::ZERO; q as usize + 2];
            c[0] = Elem::ONE;
            c[1] = Elem::ONE;
            c[q as usize + 1] = Elem::ONE;
            c
        };
        let roots = big.poly_roots(&poly)?;
        let mut factors: Vec<Factor> = Vec::new();
        let mut seen: Vec<Elem> = Vec::new();
        for &a in &roots {
            if seen.contains(&a) {
                continue;
            }
            let mut orbit = vec![a];
            let mut x = big.frobenius(a, 2 * e);
            while x != a {
                orbit.push(x);
                x = big.frobenius(x, 2 * e);
            }
            seen.extend(&orbit);
            let coeffs = big
                .poly_from_roots(&orbit)
                .into_iter()
                .map(|c| big.restrict(&gf2, c))
                .collect::<Result<Vec<_>>>()?;
            orbit.sort_by_key(|&x| big.gap_rank(x));
            factors.push(Factor { roots: orbit, coeffs });
        }
        factors.sort_by(|x, y| {
            (x.coeffs.len(), x.coeffs.iter().map(|&c| gf2.gap_rank(c)).collect::<Vec<_>>())
                .cmp(&(y.coeffs.len(), y.coeffs.iter().map(|&c| gf2.gap_rank(c)).collect::<Vec<_>>()))
        });
        let factor_of: HashMap<Elem, u16> = factors
            .iter()
            .enumerate()
            .flat_map(|(i, fa)| fa.roots.iter().map(move |&r| (r, i as u16)))
            .collect();

        let m = qq.pow(6) - 1;
        let k = qq * qq - qq + 1;
        let ea = (k * (qq * qq - 1)) % m;
        let en = (k * (qq.pow(3) - 1)) % m;
        let mut labels = Vec::with_capacity(geometry.points.len());
        let mut a_labels = Vec::with_capacity(geometry.points.len());
        for v in &geometry.points {
            let u = quadric.ext.from_coords(v);
            let l = big.log(u).expect("nonzero") as u64;
            let a = big.exp(l * ea % m);
            let n = big.exp(l * en % m);
            let fi = *factor_of
                .get(&a)
                .ok_or_else(|| Error::Verification("label a is not a zero of X^(q+1)+X+1".into()))?;
            let n2 = big.restrict(&gf2, n)?;
            labels.push((fi, gf2.log(n2).expect("nonzero")));
            a_labels.push(a);
        }
        let mut n_logs: Vec<u32> = (0..=q).map(|i| i * (q - 1)).collect();
        n_logs.sort_unstable();

        let mut classes: HashMap<(Elem, u32), Vec<u32>> = HashMap::new();
        for (i, (&a, &(_, n))) in a_labels.iter().zip(&labels).enumerate() {
            classes.entry((a, n)).or_default().push(i as u32);
        }
        let mut k_orbits: Vec<Vec<u32>> = classes.into_values().collect();
        k_orbits.sort();
        let line_index = geometry.lines.iter().enumerate().map(|(i, l)| (l.clone(), i as u32)).collect();
        Ok(SingerFrame { q, quadric, geometry, gf2, factors, n_logs, labels, a_labels, k_orbits, line_index })
    }

    pub fn field(&self) -> &Field {
        self.quadric.ext.small()
    }

    pub fn big(&self) -> &Field {
        self.quadric.ext.big()
    }

    /// `omega = xi^((q^3-1)(q+1))`.
    pub fn omega(&self) -> Elem {
        let q = self.q as u64;
        self.big().exp((q.pow(3) - 1) * (q + 1))
    }

    /// GF(q)-matrix of multiplication by `c` in GF(q^6).
    pub fn mult_matrix(&self, c: Elem) -> Matrix {
        let ext = &self.quadric.ext;
        let big = ext.big();
        (0..6).map(|i| ext.to_coords(big.mul(c, big.exp(i as u64)))).collect()
    }

    /// GF(q)-matrix of `u -> u^(q^2)`.
    pub fn tau_matrix(&self) -> Matrix {
        let ext = &self.quadric.ext;
        let big = ext.big();
        let e = self.field().degree();
        (0..6).map(|i| ext.to_coords(big.frobenius(big.exp(i as u64), 2 * e))).collect()
    }

    /// Point permutation of a GF(q)-linear map of GF(q^6).
    pub fn point_perm(&self, m: &Matrix) -> Result<Vec<u32>> {
        let f = self.field();
        self.geometry
            .points
            .iter()
            .map(|v| {
                self.geometry
                    .point_id(f, &crate::linspaces::vec_mat(f, v, m))
                    .ok_or_else(|| Error::Verification("map does not preserve the quadric".into()))
            })
            .collect()
    }

    pub fn line_perm(&self, m: &Matrix) -> Result<Vec<u32>> {
        let f = self.field();
        self.geometry
            .lines
            .iter()
            .map(|l| {
                self.line_index
                    .get(&l.image(f, m, 0))
                    .copied()
                    .ok_or_else(|| Error::Verification("map does not preserve singular lines".into()))
            })
            .collect()
    }

    /// Index of the factor with the given monic coefficients (constant
    /// term first) over GF(q^2).
    pub fn factor_index(&self, coeffs: &[Elem]) -> Option<usize> {
        self.factors.iter().position(|f| f.coeffs == coeffs)
    }

    /// `X^3+z^50X^2+...`-style rendering.
    pub fn factor_display(&self, i: usize) -> String {
        let g = &self.gf2;
        let c = &self.factors[i].coeffs;
        let mut out = String::new();
        for d in (0..c.len()).rev() {
            if c[d].is_zero() {
                continue;
            }
            let neg = g.neg(c[d]);
            let (sign, mag) = if c[d].0 < g.characteristic() && neg.0 < c[d].0 { ("-", neg) } else { ("+", c[d]) };
            if !out.is_empty() || sign == "-" {
                out.push_str(sign);
            }
            let coef = g.display(mag);
            let mono = match d {
                0 => String::new(),
                1 => "X".into(),
                _ => format!("X^{d}"),
            };
            if d == 0 {
                out.push_str(&coef);
            } else if mag != Elem::ONE {
                out.push_str(&coef);
                out.push_str(&mono);
            } else {
                out.push_str(&mono);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiEntry {
    /// Monic factor coefficients over GF(q^2), constant term first.
    pub factor: Vec<WireElem>,
    /// Log of `n` base the primitive element of GF(q^2).
    pub n_log: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiSpec {
    pub q: u32,
    pub entries: Vec<PiEntry>,
}

impl PiSpec {
    /// Entries from `(factor coefficients, n values)` written as element
    /// tokens over GF(q^2) (`"-1"`, `"z50"`, ...).
    pub fn from_tokens(q: u32, rows: &[(&[&str], &[&str])]) -> Result<PiSpec> {
        let gf2 = Field::from_order(q * q)?;
        let mut entries = Vec::new();
        for (factor, ns) in rows {
            let coeffs: Vec<WireElem> =
                factor.iter().map(|t| parse_elem(&gf2, t).map(|x| gf2.to_wire(x))).collect::<Result<_>>()?;
            for t in ns.iter() {
                let n = parse_elem(&gf2, t)?;
                let n_log = gf2.log(n).ok_or_else(|| config_err!("n must be nonzero"))?;
                entries.push(PiEntry { factor: coeffs.clone(), n_log });
            }
        }
        Ok(PiSpec { q, entries })
    }

    fn resolve(&self, frame: &SingerFrame) -> Result<Vec<(u16, u32)>> {
        if self.q != frame.q {
            return Err(config_err!("PiSpec for q = {} used with q = {}", self.q, frame.q));
        }
        let mut out = Vec::new();
        for e in &self.entries {
            let coeffs = e.factor.iter().map(|w| frame.gf2.from_wire(w)).collect::<Result<Vec<_>>>()?;
            let fi = frame
                .factor_index(&coeffs)
                .ok_or_else(|| config_err!("{:?} is not a factor of X^(q+1)+X+1", coeffs))?;
            if !frame.n_logs.contains(&e.n_log) {
                return Err(config_err!("z^{} is not in N", e.n_log));
            }
            out.push((fi as u16, e.n_log));
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

/// Bundled solutions for `q` in {3, 5, 7, 9}.
pub fn bundled_pi(q: u32) -> Result<PiSpec> {
    let rows: Vec<(&[&str], &[&str])> = match q {
        3 => vec![(&["-1", "1"], &["1", "z6"]), (&["-1", "1", "1", "1"], &["-1", "z2"])],
        5 => vec![(&["-1", "-1", "2", "1"], &["1", "z8", "z16"]), (&["-1", "0", "3", "1"], &["1", "z4", "z20"])],
        7 => vec![
            (&["3", "1"], &["z6", "z12", "z30", "z36"]),
            (&["5", "1"], &["1", "-1", "z18", "z42"]),
            (&["-1", "4", "0", "1"], &["1", "-1", "z18", "z42"]),
            (&["-1", "3", "-1", "1"], &["z6", "z12", "z30", "z36"]),
        ],
        9 => vec![
            (&["-1", "1"], &["1", "z8", "z24", "z56", "z72"]),
            (&["-1", "-1", "-1", "1"], &["1", "z16", "z32", "z48", "z64"]),
            (&["-1", "z50", "z50", "1"], &["1", "z8", "z16", "z64", "z72"]),
            (&["-1", "z70", "z70", "1"], &["1", "z24", "z32", "z48", "z56"]),
        ],
        _ => return Err(config_err!("no bundled table for q = {q}")),
    };
    PiSpec::from_tokens(q, &rows)
}

/// Singular points whose label lies in `pi`.
pub fn pi_hemisystem(frame: &SingerFrame, pi: &PiSpec) -> Result<Hemisystem> {
    let wanted = pi.resolve(frame)?;
    let pts: Vec<u32> = frame
        .labels
        .iter()
        .enumerate()
        .filter(|(_, l)| wanted.binary_search(l).is_ok())
        .map(|(i, _)| i as u32)
        .collect();
    Ok(Hemisystem::new(pts, Provenance::Singer { pi: serde_json::to_value(pi).expect("serializable") }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointHemisystemReport {
    pub passed: bool,
    pub size: usize,
    pub expected_size: usize,
    /// `(line, count)` for singular lines not meeting the set in `(q+1)/2` points.
    pub violations: Vec<(u32, u32)>,
}

pub fn verify_point_hemisystem(frame: &SingerFrame, pts: &[u32]) -> PointHemisystemReport {
    let inc = &frame.geometry.incidence;
    let want = frame.q.div_ceil(2);
    let counts = inc.dual().point_counts(pts);
    let violations: Vec<(u32, u32)> =
        counts.iter().enumerate().filter(|(_, &c)| c != want).map(|(l, &c)| (l as u32, c)).collect();
    let expected_size = inc.num_points() / 2;
    PointHemisystemReport { passed: violations.is_empty() && pts.len() == expected_size, size: pts.len(), expected_size, violations }
}

pub fn collinearity_graph(frame: &SingerFrame, pts: &[u32]) -> Graph {
    Graph::collinearity(&frame.geometry.incidence, pts)
}

/// Exponent `e` with `(u z)` having `n`-label `n z^e`, for `z` the primitive
/// element of GF(q^2).
pub fn multiplier_shift(frame: &SingerFrame, z_log: u32) -> u32 {
    let q = frame.q as u64;
    let m2 = q * q - 1;
    ((z_log as u64 * (q * q - q + 1) % m2) * ((q.pow(3) - 1) % m2) % m2) as u32
}

/// The image of `pi` under multiplication by `z^z_log`, which fixes factor
/// labels and shifts `n`-labels.
pub fn pi_apply(frame: &SingerFrame, pi: &PiSpec, z_log: u32) -> PiSpec {
    let shift = multiplier_shift(frame, z_log);
    let m2 = frame.gf2.order() - 1;
    let mut entries: Vec<PiEntry> = pi
        .entries
        .iter()
        .map(|e| PiEntry { factor: e.factor.clone(), n_log: (e.n_log + shift) % m2 })
        .collect();
    entries.sort_by_key(|a| (serde_json::to_string(&a.factor).unwrap(), a.n_log));
    PiSpec { q: pi.q, entries }
}

/// The distinct images of `pi` under `<z^z_log>`, starting with `pi`.
pub fn pi_orbit_closure(frame: &SingerFrame, pi: &PiSpec, z_log: u32) -> Vec<PiSpec> {
    let norm = |p: &PiSpec| pi_apply(frame, p, 0);
    let start = norm(pi);
    let mut out = vec![start.clone()];
    let mut cur = pi_apply(frame, &start, z_log);
    while cur != start {
        out.push(cur.clone());
        cur = pi_apply(frame, &cur, z_log);
    }
    out
}

/// Point ids of `<u^(q^2)>` for every point.
pub fn tau_perm(frame: &SingerFrame) -> Result<Vec<u32>> {
    frame.point_perm(&frame.tau_matrix())
}

/// Normalized coordinates of a GF(q^6) element.
pub fn coords_of(frame: &SingerFrame, x: Elem) -> Option<Vec<Elem>> {
    normalize(frame.field(), &frame.quadric.ext.to_coords(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q3_frame() {
        let fr = SingerFrame::new(3).unwrap();
        assert_eq!(fr.k_orbits.len(), 16);
        assert!(fr.k_orbits.iter().all(|o| o.len() == 7));
        let sizes: Vec<usize> = fr.factors.iter().map(|f| f.roots.len()).collect();
        assert_eq!(sizes, vec![1, 3]);
        assert_eq!(fr.factor_display(0), "X-1");
        assert_eq!(fr.factor_display(1), "X^3+X^2+X-1");
        assert_eq!(fr.n_logs, vec![0, 2, 4, 6]);
    }

    #[test]
    fn q3_bundled_is_hemisystem() {
        let fr = SingerFrame::new(3).unwrap();
        let h = pi_hemisystem(&fr, &bundled_pi(3).unwrap()).unwrap();
        assert_eq!(h.lines.len(), 56);
        let r = verify_point_hemisystem(&fr, &h.lines);
        assert!(r.passed, "{r:?}");
    }
}
