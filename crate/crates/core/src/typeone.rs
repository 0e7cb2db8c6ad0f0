//! Type I hemisystems: the BLT partition relative to a base line, the
//! construction from plane subsets on that line, the group `T`, and
//! hemisystem verification.

use serde::{Deserialize, Serialize};

use crate::blt::{w3_form, BltSet};
use crate::error::{domain_err, pre_err, Error, Result};
use crate::field::{Elem, Field, WireElem};
use crate::graph::{Graph, SrgParams};
use crate::group::{matrix_group_closure, orbit_labels, orbits_from_labels};
use crate::knarr::{elation, project_to_w3, FlockGq, GqDescriptor, LineType, PointType, SemilinearMap};
use crate::linspaces::{
    axpy, is_totally_singular, isotropic_subspaces, perp, scale, PointLineGeometry, Subspace, Vector,
};

/// All lines of W(3,q) disjoint from every member, in canonical order.
pub fn admissible_base_lines(b: &BltSet) -> Result<Vec<Subspace>> {
    let f = b.field();
    let geo = PointLineGeometry::polar(f, &w3_form(f))?;
    let mut on_blt = vec![false; geo.points.len()];
    for l in b.lines() {
        for x in l.points(f) {
            on_blt[geo.point_id(f, &x).expect("t.i. point") as usize] = true;
        }
    }
    Ok(geo
        .lines
        .iter()
        .enumerate()
        .filter(|(j, _)| geo.incidence.points_on(*j).iter().all(|&p| !on_blt[p as usize]))
        .map(|(_, l)| l.clone())
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BltPartition {
    pub base_line: Subspace,
    /// Indices into the BLT-set's canonical line list.
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
}

/// `{<Y, Y^perp cap pi> : Y in l}` for a BLT line `pi`.
pub fn projection_lines(f: &Field, base: &Subspace, pi: &Subspace) -> Result<Vec<Subspace>> {
    let j = w3_form(f);
    let mut out = Vec::new();
    for y in base.points(f) {
        let yp = Subspace::point(f, &y)?;
        let z = perp(f, &yp, &j)?.meet(f, pi);
        if z.dim() != 1 {
            return Err(domain_err!("base line meets a BLT line"));
        }
        out.push(yp.join(f, &z));
    }
    out.sort_by(|a, b| a.cmp_canonical(f, b));
    Ok(out)
}

/// The relation of the partition lemma on the BLT lines; fails loudly if it
/// is not an equivalence relation with two classes of equal size.
pub fn blt_partition(b: &BltSet, base: &Subspace) -> Result<BltPartition> {
    let f = b.field();
    if base.ambient() != 4 || base.dim() != 2 || !is_totally_singular(f, base, &w3_form(f)) {
        return Err(domain_err!("base line must be a totally isotropic line of W(3,q)"));
    }
    if b.lines().iter().any(|l| l.meet_dim(f, base) > 0) {
        return Err(pre_err!("base line meets a BLT line"));
    }
    let sets: Vec<Vec<Subspace>> =
        b.lines().iter().map(|pi| projection_lines(f, base, pi)).collect::<Result<_>>()?;
    for s in &sets {
        if s.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Verification("projection lines are not distinct".into()));
        }
    }
    let n = sets.len();
    let rel = |i: usize, j: usize| i == j || sets[i].iter().all(|x| sets[j].binary_search_by(|y| y.cmp_canonical(f, x)).is_err());
    for i in 0..n {
        for j in 0..n {
            if rel(i, j) != rel(j, i) {
                return Err(Error::Verification(format!("relation is not symmetric at ({i},{j})")));
            }
            for k in 0..n {
                if rel(i, j) && rel(j, k) && !rel(i, k) {
                    return Err(Error::Verification(format!("relation is not transitive at ({i},{j},{k})")));
                }
            }
        }
    }
    let plus: Vec<usize> = (0..n).filter(|&j| rel(0, j)).collect();
    let minus: Vec<usize> = (0..n).filter(|&j| !rel(0, j)).collect();
    if plus.len() != minus.len() {
        return Err(Error::Verification(format!("classes have sizes {} and {}", plus.len(), minus.len())));
    }
    if minus.iter().any(|&i| minus.iter().any(|&j| !rel(i, j))) {
        return Err(Error::Verification("more than two classes".into()));
    }
    Ok(BltPartition { base_line: base.clone(), plus, minus })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl std::str::FromStr for Orientation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Orientation> {
        match s {
            "+" | "plus" => Ok(Orientation::Plus),
            "-" | "minus" => Ok(Orientation::Minus),
            _ => Err(Error::Config(format!("orientation must be + or -, got {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    TypeOne {
        ell: Vec<Vec<WireElem>>,
        /// 1-based indices of planes on the base line.
        s: Vec<usize>,
        orientation: Orientation,
    },
    Singer {
        pi: serde_json::Value,
    },
    Search {
        run_id: String,
    },
    Imported,
}

/// A sorted set of line indices of a flock GQ (or point indices of the
/// elliptic quadric, for point-hemisystems).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hemisystem {
    pub lines: Vec<u32>,
    pub provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct HemisystemJson {
    schema: String,
    gq: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    model: Option<String>,
    lines: Vec<u32>,
    provenance: Provenance,
}

impl Hemisystem {
    pub fn new(mut lines: Vec<u32>, provenance: Provenance) -> Hemisystem {
        lines.sort_unstable();
        lines.dedup();
        Hemisystem { lines, provenance }
    }

    pub fn complement(&self, num_lines: usize) -> Hemisystem {
        let mut member = vec![false; num_lines];
        for &l in &self.lines {
            member[l as usize] = true;
        }
        Hemisystem::new((0..num_lines as u32).filter(|&l| !member[l as usize]).collect(), self.provenance.clone())
    }

    pub fn to_json(&self, gq: &GqDescriptor) -> serde_json::Value {
        serde_json::to_value(HemisystemJson {
            schema: "qf/1".into(),
            gq: serde_json::to_value(gq).expect("serializable"),
            model: None,
            lines: self.lines.clone(),
            provenance: self.provenance.clone(),
        })
        .expect("serializable")
    }

    /// Point-hemisystem of the elliptic quadric, tagged `"model":"Qminus5"`.
    pub fn to_json_points(&self, q: u32) -> serde_json::Value {
        serde_json::to_value(HemisystemJson {
            schema: "qf/1".into(),
            gq: serde_json::json!({"schema": "qf/1", "q": q, "model": "Qminus5"}),
            model: Some("Qminus5".into()),
            lines: self.lines.clone(),
            provenance: self.provenance.clone(),
        })
        .expect("serializable")
    }

    /// Parses the JSON form, returning the embedded GQ descriptor too.
    pub fn from_json(v: &serde_json::Value) -> Result<(Hemisystem, serde_json::Value)> {
        let j: HemisystemJson = serde_json::from_value(v.clone())?;
        if j.schema != "qf/1" {
            return Err(Error::Config(format!("unsupported schema {:?}", j.schema)));
        }
        Ok((Hemisystem::new(j.lines, j.provenance), j.gq))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HemisystemReport {
    pub passed: bool,
    pub expected: u32,
    pub size: usize,
    pub expected_size: usize,
    /// `(point, count)` wherever the count differs from `expected`.
    pub violations: Vec<(u32, u32)>,
}

/// Recounts `A h` against `(s + 1) / 2` for every point.
pub fn verify_hemisystem(gq: &FlockGq, h: &[u32]) -> HemisystemReport {
    verify_lines(gq.incidence(), h)
}

pub fn verify_lines(inc: &crate::incidence::IncidenceStructure, h: &[u32]) -> HemisystemReport {
    let t1 = inc.lines_through(0).len() as u32;
    let expected = t1.div_ceil(2);
    let counts = inc.point_counts(h);
    let violations: Vec<(u32, u32)> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != expected)
        .map(|(p, &c)| (p as u32, c))
        .collect();
    let expected_size = inc.num_lines() / 2;
    HemisystemReport { passed: violations.is_empty() && h.len() == expected_size, expected, size: h.len(), expected_size, violations }
}

/// The data shared by all Type I hemisystems on one base line.
pub struct TypeOneFrame {
    pub ell: Subspace,
    pub partition: BltPartition,
    /// Totally isotropic planes on `ell`, canonically sorted (index 1 first).
    pub planes: Vec<Subspace>,
    /// 0-based index of `<P, ell>` in `planes`.
    pub base_plane: usize,
    /// For each plane, the affine points it contains.
    plane_points: Vec<Vec<u32>>,
}

/// `<(0, w1, 0), (0, w2, 0)>` for a line `<w1, w2>` of W(3,q).
pub fn lift_base_line(f: &Field, base: &Subspace) -> Subspace {
    let rows: Vec<Vector> = base
        .rows()
        .iter()
        .map(|w| {
            let mut v = vec![Elem::ZERO];
            v.extend_from_slice(w);
            v.push(Elem::ZERO);
            v
        })
        .collect();
    Subspace::new(f, &rows).expect("independent")
}

impl TypeOneFrame {
    pub fn new(gq: &FlockGq, ell: &Subspace) -> Result<TypeOneFrame> {
        let f = gq.field();
        let form = gq.form();
        if ell.ambient() != 6 || ell.dim() != 2 || !is_totally_singular(f, ell, form) {
            return Err(pre_err!("ell must be a totally isotropic line of W(5,q)"));
        }
        let p = Subspace::point(f, &gq.point_vector(gq.base_point() as usize).expect("P"))?;
        if ell.contains(f, &p) {
            return Err(pre_err!("ell passes through P"));
        }
        let ell_p = project_to_w3(f, ell).map_err(|_| pre_err!("ell is not contained in P^perp"))?;
        if ell_p.dim() != 2 {
            return Err(pre_err!("ell does not project to a line"));
        }
        for j in gq.blt_lines() {
            if ell.meet_dim(f, gq.line_subspace(j)) > 0 {
                return Err(pre_err!("ell meets a BLT plane"));
            }
        }
        let partition = blt_partition(gq.blt(), &ell_p)?;
        let planes = isotropic_subspaces(f, form, 3, Some(ell), None)?;
        let pl = ell.join(f, &p);
        let base_plane = planes.iter().position(|x| *x == pl).expect("<P, ell> is totally isotropic");
        let plane_points = planes.iter().map(|pi| affine_points(gq, pi)).collect();
        Ok(TypeOneFrame { ell: ell.clone(), partition, planes, base_plane, plane_points })
    }

    /// Frame on the lift of an admissible line of W(3,q).
    pub fn from_base_line(gq: &FlockGq, base: &Subspace) -> Result<TypeOneFrame> {
        TypeOneFrame::new(gq, &lift_base_line(gq.field(), base))
    }

    /// All admissible `S`: subsets of size `(q-1)/2` of `1..=q+1` avoiding
    /// the index of `<P, ell>`, in lexicographic order.
    pub fn all_subsets(&self) -> Vec<Vec<usize>> {
        let q = self.planes.len() - 1;
        let pool: Vec<usize> = (1..=q + 1).filter(|&i| i != self.base_plane + 1).collect();
        let mut out = Vec::new();
        let mut cur = Vec::new();
        combinations(&pool, (q - 1) / 2, 0, &mut cur, &mut out);
        out
    }

    /// `O^or`, `L^or_S`, `L^(-or)_(S^c)` with `S` given 1-based.
    pub fn build(&self, gq: &FlockGq, s: &[usize], orientation: Orientation) -> Result<Hemisystem> {
        let q = gq.q() as usize;
        let mut s_sorted = s.to_vec();
        s_sorted.sort_unstable();
        s_sorted.dedup();
        if s_sorted.len() != (q - 1) / 2 || s.len() != s_sorted.len() {
            return Err(pre_err!("S must have {} distinct elements", (q - 1) / 2));
        }
        if s_sorted.iter().any(|&i| i == 0 || i > q + 1) {
            return Err(pre_err!("S indices must lie in 1..={}", q + 1));
        }
        if s_sorted.contains(&(self.base_plane + 1)) {
            return Err(pre_err!("S contains the index {} of <P, ell>", self.base_plane + 1));
        }
        // 1 for S, 2 for S^c
        let mut label = vec![0u8; gq.num_points()];
        for (i, pts) in self.plane_points.iter().enumerate() {
            if i == self.base_plane {
                continue;
            }
            let tag = if s_sorted.contains(&(i + 1)) { 1 } else { 2 };
            for &x in pts {
                label[x as usize] = tag;
            }
        }
        let blt_index = |j: usize| -> usize {
            let proj = project_to_w3(gq.field(), gq.line_subspace(j)).expect("BLT planes lie in P^perp");
            gq.blt().lines().iter().position(|l| *l == proj).expect("BLT plane projects to a BLT line")
        };
        let (first, second) = match orientation {
            Orientation::Plus => (&self.partition.plus, &self.partition.minus),
            Orientation::Minus => (&self.partition.minus, &self.partition.plus),
        };
        let class_of: Vec<u8> = (0..gq.num_lines())
            .map(|j| {
                if gq.line_type(j) != LineType::Blt {
                    return 0;
                }
                let b = blt_index(j);
                if first.contains(&b) {
                    1
                } else if second.contains(&b) {
                    2
                } else {
                    0
                }
            })
            .collect();
        let mut lines: Vec<u32> = gq.blt_lines().filter(|&j| class_of[j] == 1).map(|j| j as u32).collect();
        for j in gq.tangent_lines() {
            let sec = gq.tangent_secant(j) as usize;
            let class = class_of[gq.secant_plane(sec) as usize];
            let want = class; // class 1 needs S, class 2 needs S^c
            let hit = gq
                .incidence()
                .points_on(j)
                .iter()
                .any(|&x| gq.point_type(x as usize) == PointType::Affine && label[x as usize] == want);
            if hit {
                lines.push(j as u32);
            }
        }
        let f = gq.field();
        Ok(Hemisystem::new(
            lines,
            Provenance::TypeOne { ell: self.ell.to_wire(f), s: s_sorted, orientation },
        ))
    }
}

fn combinations(pool: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..pool.len() {
        cur.push(pool[i]);
        combinations(pool, k, i + 1, cur, out);
        cur.pop();
    }
}

fn affine_points(gq: &FlockGq, plane: &Subspace) -> Vec<u32> {
    let f = gq.field();
    let rows = plane.rows();
    let Some(k) = rows.iter().position(|r| !r[5].is_zero()) else {
        return Vec::new();
    };
    let v = scale(f, f.inv(rows[k][5]).expect("nonzero"), &rows[k]);
    let inner: Vec<Vector> = rows
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != k)
        .map(|(_, r)| axpy(f, f.neg(r[5]), &v, r))
        .collect();
    let mut out = Vec::new();
    for s in f.elements() {
        for r in f.elements() {
            let x = axpy(f, r, &inner[1], &axpy(f, s, &inner[0], &v));
            out.push(gq.point_id_of_vector(&x).expect("affine point"));
        }
    }
    out.sort_unstable();
    out
}

/// Type I hemisystem from an explicit base line of W(5,q).
pub fn typeone_build(gq: &FlockGq, ell: &Subspace, s: &[usize], orientation: Orientation) -> Result<Hemisystem> {
    TypeOneFrame::new(gq, ell)?.build(gq, s, orientation)
}

/// `M(a, 0)` for `a` over a GF(p)-basis of the projection of `ell`: two
/// generators when q is prime, `2e` when `q = p^e`.
pub fn t_group(gq: &FlockGq, ell: &Subspace) -> Result<Vec<SemilinearMap>> {
    let f = gq.field();
    let proj = project_to_w3(f, ell)?;
    if proj.dim() != 2 {
        return Err(pre_err!("ell does not project to a line"));
    }
    let mut gens = Vec::new();
    for w in proj.rows() {
        for k in 0..f.degree() as u64 {
            let a = scale(f, f.exp(k), w);
            gens.push(SemilinearMap::linear(elation(f, &a, Elem::ZERO)));
        }
    }
    Ok(gens)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TReport {
    pub order: usize,
    pub fixes_hemisystem: bool,
    pub fixes_blt_lines: bool,
    /// Distinct orbit sizes on tangent (type (a)) lines.
    pub tangent_orbit_sizes: Vec<usize>,
    pub semiregular_on_tangents: bool,
    pub fixes_planes_on_ell: bool,
}

impl TReport {
    pub fn passed(&self, q: usize) -> bool {
        self.order == q * q
            && self.fixes_hemisystem
            && self.fixes_blt_lines
            && self.semiregular_on_tangents
            && self.tangent_orbit_sizes == [q * q]
    }
}

pub fn check_t(gq: &FlockGq, frame: &TypeOneFrame, gens: &[SemilinearMap], h: &[u32]) -> Result<TReport> {
    let f = gq.field();
    let mats: Vec<_> = gens.iter().map(|g| g.matrix.clone()).collect();
    let q = gq.q() as usize;
    let order = matrix_group_closure(f, &mats, q * q * q)?.len();
    let perms = gens.iter().map(|g| gq.induced(g)).collect::<Result<Vec<_>>>()?;
    let mut member = vec![false; gq.num_lines()];
    for &l in h {
        member[l as usize] = true;
    }
    let fixes_hemisystem = perms.iter().all(|p| h.iter().all(|&l| member[p.lines[l as usize] as usize]));
    let fixes_blt_lines = perms.iter().all(|p| gq.blt_lines().all(|j| p.lines[j] as usize == j));
    let line_perms: Vec<&[u32]> = perms.iter().map(|p| p.lines.as_slice()).collect();
    let labels = orbit_labels(gq.num_lines(), &line_perms);
    let mut sizes: Vec<usize> = orbits_from_labels(&labels)
        .iter()
        .filter(|o| gq.line_type(o[0] as usize) == LineType::Tangent)
        .map(Vec::len)
        .collect();
    sizes.sort_unstable();
    sizes.dedup();
    let semiregular_on_tangents = sizes.iter().all(|&s| s == order);
    let fixes_planes_on_ell = gens.iter().all(|g| frame.planes.iter().all(|pl| g.image(f, pl) == *pl));
    Ok(TReport { order, fixes_hemisystem, fixes_blt_lines, tangent_orbit_sizes: sizes, semiregular_on_tangents, fixes_planes_on_ell })
}

/// Concurrency graph of the member lines.
pub fn concurrency_graph(gq: &FlockGq, h: &[u32]) -> Graph {
    Graph::concurrency(gq.incidence(), h)
}

pub fn expected_srg(q: u32) -> SrgParams {
    SrgParams::hemisystem(q as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blt::{blt_build, BltParams, Family};
    use crate::linspaces::parse_matrix;

    #[test]
    fn segre_from_table_line() {
        let gq = FlockGq::build(blt_build(Family::Linear, 3, BltParams::default()).unwrap()).unwrap();
        let f = gq.field();
        let ell = Subspace::new(f, &parse_matrix(f, "0 1 0 1 0 0; 0 0 1 1 1 0").unwrap()).unwrap();
        let frame = TypeOneFrame::new(&gq, &ell).unwrap();
        assert_eq!(frame.planes.len(), 4);
        assert_eq!(frame.base_plane, 1);
        assert_eq!(frame.all_subsets(), vec![vec![1], vec![3], vec![4]]);
        for s in frame.all_subsets() {
            for o in [Orientation::Plus, Orientation::Minus] {
                let h = frame.build(&gq, &s, o).unwrap();
                let r = verify_hemisystem(&gq, &h.lines);
                assert!(r.passed, "{s:?} {o:?}: {r:?}");
                assert_eq!(h.lines.len(), 56);
            }
        }
        assert!(frame.build(&gq, &[2], Orientation::Plus).is_err());
        assert!(frame.build(&gq, &[1, 3], Orientation::Plus).is_err());
    }
}
