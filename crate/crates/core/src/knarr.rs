//! The flock generalized quadrangle K(O) of order (q^2, q) in the Knarr
//! model: a BLT-set lifted to planes on `P = <e1>` of W(5,q).

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::blt::{verify_blt, BltSet};
use crate::error::{domain_err, pre_err, Error, Result};
use crate::field::{Elem, Field, WireElem};
use crate::incidence::{GqReport, IncidenceStructure};
use crate::linspaces::{
    axpy, mat_mul, normalize, perp, transpose, vec_mat, BilinearForm, Matrix, Subspace, Vector,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PointType {
    /// A point of PG(5,q) outside `P^perp`.
    #[serde(rename = "i")]
    Affine,
    /// A line of a BLT plane not through `P`.
    #[serde(rename = "ii")]
    Secant,
    #[serde(rename = "iii")]
    Base,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LineType {
    /// A totally isotropic plane outside `P^perp` meeting a BLT plane in a line.
    #[serde(rename = "a")]
    Tangent,
    /// A BLT plane.
    #[serde(rename = "b")]
    Blt,
}

pub struct FlockGq {
    blt: BltSet,
    form: BilinearForm,
    affine_keys: Vec<u64>,
    secants: Vec<Subspace>,
    lines: Vec<Subspace>,
    n_tangent: usize,
    key_index: Vec<u32>,
    secant_index: HashMap<Subspace, u32>,
    line_index: HashMap<Subspace, u32>,
    /// The secant contained in each tangent line.
    tangent_secant: Vec<u32>,
    /// The BLT-plane line containing each secant.
    secant_plane: Vec<u32>,
    incidence: IncidenceStructure,
}

/// Key of a normalized vector: its GAP-rank digits read in base q, first
/// coordinate most significant. Key order is canonical order.
fn encode(f: &Field, v: &[Elem]) -> u64 {
    let q = f.order() as u64;
    v.iter().fold(0, |acc, &x| acc * q + f.gap_rank(x) as u64)
}

fn decode(f: &Field, mut key: u64, n: usize) -> Vector {
    let q = f.order() as u64;
    let mut v = vec![Elem::ZERO; n];
    for slot in v.iter_mut().rev() {
        *slot = f.from_gap_rank((key % q) as u32);
        key /= q;
    }
    v
}

fn e(_f: &Field, i: usize) -> Vector {
    (0..6).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }).collect()
}

/// `<e1, (0,u1,0), (0,u2,0)>` for a line `<u1, u2>` of W(3,q).
pub fn lift_line(f: &Field, line: &Subspace) -> Subspace {
    let mut rows = vec![e(f, 0)];
    for u in line.rows() {
        let mut v = vec![Elem::ZERO];
        v.extend_from_slice(u);
        v.push(Elem::ZERO);
        rows.push(v);
    }
    Subspace::new(f, &rows).expect("independent rows")
}

/// Middle four coordinates of a subspace of `P^perp` modulo `P`.
pub fn project_to_w3(f: &Field, u: &Subspace) -> Result<Subspace> {
    if u.rows().iter().any(|r| !r[5].is_zero()) {
        return Err(domain_err!("subspace is not contained in P^perp"));
    }
    let rows: Matrix = u.rows().iter().map(|r| r[1..5].to_vec()).collect();
    Subspace::span(f, &rows)
}

impl FlockGq {
    pub fn build(blt: BltSet) -> Result<FlockGq> {
        let report = verify_blt(&blt)?;
        if !report.passed() {
            return Err(pre_err!("input is not a BLT-set: {report:?}"));
        }
        Ok(FlockGq::build_unchecked(blt))
    }

    /// Builds without checking the BLT property (for defective examples).
    pub fn build_unchecked(blt: BltSet) -> FlockGq {
        let f = blt.field().clone();
        let q = f.order() as u64;
        let form = BilinearForm::standard_symplectic(&f, 6);

        // type (i)
        let mut affine_keys: Vec<u64> = Vec::with_capacity(q.pow(5) as usize);
        let total = q.pow(5);
        for code in 0..total {
            let mut v = decode(&f, code, 5);
            v.push(Elem::ONE);
            affine_keys.push(encode(&f, &normalize(&f, &v).expect("nonzero")));
        }
        affine_keys.sort_unstable();

        let mut key_index = vec![u32::MAX; q.pow(6) as usize];
        for (i, &k) in affine_keys.iter().enumerate() {
            key_index[k as usize] = i as u32;
        }

        // type (ii), grouped by BLT plane
        let planes: Vec<Subspace> = blt.lines().iter().map(|l| lift_line(&f, l)).collect();
        let mut secants: Vec<(Subspace, usize)> = Vec::new();
        for (j, pl) in planes.iter().enumerate() {
            let (w1, w2) = (&pl.rows()[1], &pl.rows()[2]);
            for a in f.elements() {
                for b in f.elements() {
                    let r1 = axpy(&f, a, &e(&f, 0), w1);
                    let r2 = axpy(&f, b, &e(&f, 0), w2);
                    secants.push((Subspace::new(&f, &[r1, r2]).expect("independent"), j));
                }
            }
        }
        secants.sort_by(|x, y| x.0.cmp_canonical(&f, &y.0));
        let n_aff = affine_keys.len() as u32;
        let secant_index: HashMap<Subspace, u32> =
            secants.iter().enumerate().map(|(i, s)| (s.0.clone(), n_aff + i as u32)).collect();
        let base_id = n_aff + secants.len() as u32;
        key_index[encode(&f, &e(&f, 0)) as usize] = base_id;

        // type (a): planes <m, w + c e1> on each secant m
        let mut tangents: Vec<(Subspace, Vec<u32>, u32)> = Vec::new();
        for (si, (m, _)) in secants.iter().enumerate() {
            let mp = perp(&f, m, &form).expect("dimensions agree");
            let w = mp
                .rows()
                .iter()
                .find(|r| !r[5].is_zero())
                .map(|r| {
                    let inv = f.inv(r[5]).expect("nonzero");
                    r.iter().map(|&x| f.mul(inv, x)).collect::<Vector>()
                })
                .expect("m^perp is not inside P^perp");
            let (m1, m2) = (&m.rows()[0], &m.rows()[1]);
            let sid = n_aff + si as u32;
            for c in f.elements() {
                let v = axpy(&f, c, &e(&f, 0), &w);
                let mut pts = vec![sid];
                for s in f.elements() {
                    for r in f.elements() {
                        let x = axpy(&f, r, m2, &axpy(&f, s, m1, &v));
                        let k = encode(&f, &normalize(&f, &x).expect("affine"));
                        pts.push(key_index[k as usize]);
                    }
                }
                let plane = Subspace::new(&f, &[m1.clone(), m2.clone(), v]).expect("independent");
                tangents.push((plane, pts, sid));
            }
        }
        tangents.sort_by(|x, y| x.0.cmp_canonical(&f, &y.0));
        let n_tangent = tangents.len();

        let mut blt_lines: Vec<(Subspace, Vec<u32>, usize)> = planes
            .iter()
            .enumerate()
            .map(|(j, pl)| {
                let mut pts = vec![base_id];
                pts.extend(
                    secants
                        .iter()
                        .enumerate()
                        .filter(|(_, s)| s.1 == j)
                        .map(|(i, _)| n_aff + i as u32),
                );
                (pl.clone(), pts, j)
            })
            .collect();
        blt_lines.sort_by(|x, y| x.0.cmp_canonical(&f, &y.0));
        let mut plane_line = vec![0u32; planes.len()];
        for (k, (_, _, j)) in blt_lines.iter().enumerate() {
            plane_line[*j] = (n_tangent + k) as u32;
        }

        let secant_plane: Vec<u32> = secants.iter().map(|s| plane_line[s.1]).collect();
        let tangent_secant: Vec<u32> = tangents.iter().map(|t| t.2).collect();
        let mut line_points: Vec<Vec<u32>> = Vec::with_capacity(n_tangent + planes.len());
        let mut lines: Vec<Subspace> = Vec::with_capacity(n_tangent + planes.len());
        for (s, pts, _) in tangents {
            lines.push(s);
            line_points.push(pts);
        }
        for (s, pts, _) in blt_lines {
            lines.push(s);
            line_points.push(pts);
        }
        let line_index = lines.iter().enumerate().map(|(i, l)| (l.clone(), i as u32)).collect();
        let incidence = IncidenceStructure::new(base_id as usize + 1, line_points);
        FlockGq {
            blt,
            form,
            affine_keys,
            secants: secants.into_iter().map(|s| s.0).collect(),
            lines,
            n_tangent,
            key_index,
            secant_index,
            line_index,
            tangent_secant,
            secant_plane,
            incidence,
        }
    }

    pub fn field(&self) -> &Field {
        self.blt.field()
    }

    pub fn q(&self) -> u32 {
        self.blt.q()
    }

    pub fn blt(&self) -> &BltSet {
        &self.blt
    }

    pub fn form(&self) -> &BilinearForm {
        &self.form
    }

    pub fn incidence(&self) -> &IncidenceStructure {
        &self.incidence
    }

    pub fn num_points(&self) -> usize {
        self.incidence.num_points()
    }

    pub fn num_lines(&self) -> usize {
        self.incidence.num_lines()
    }

    pub fn base_point(&self) -> u32 {
        (self.num_points() - 1) as u32
    }

    pub fn point_type(&self, i: usize) -> PointType {
        let n_aff = self.affine_keys.len();
        if i < n_aff {
            PointType::Affine
        } else if i < n_aff + self.secants.len() {
            PointType::Secant
        } else {
            PointType::Base
        }
    }

    pub fn line_type(&self, j: usize) -> LineType {
        if j < self.n_tangent {
            LineType::Tangent
        } else {
            LineType::Blt
        }
    }

    pub fn num_tangent_lines(&self) -> usize {
        self.n_tangent
    }

    pub fn tangent_lines(&self) -> std::ops::Range<usize> {
        0..self.n_tangent
    }

    pub fn blt_lines(&self) -> std::ops::Range<usize> {
        self.n_tangent..self.num_lines()
    }

    pub fn affine_points(&self) -> std::ops::Range<usize> {
        0..self.affine_keys.len()
    }

    /// The normalized vector of a type (i) point or `P`.
    pub fn point_vector(&self, i: usize) -> Option<Vector> {
        match self.point_type(i) {
            PointType::Affine => Some(decode(self.field(), self.affine_keys[i], 6)),
            PointType::Base => Some(e(self.field(), 0)),
            PointType::Secant => None,
        }
    }

    pub fn point_subspace(&self, i: usize) -> Subspace {
        match self.point_vector(i) {
            Some(v) => Subspace::point(self.field(), &v).expect("nonzero"),
            None => self.secants[i - self.affine_keys.len()].clone(),
        }
    }

    pub fn line_subspace(&self, j: usize) -> &Subspace {
        &self.lines[j]
    }

    /// The secant (type (ii) point) on a tangent line.
    pub fn tangent_secant(&self, j: usize) -> u32 {
        self.tangent_secant[j]
    }

    /// The BLT-plane line containing a secant.
    pub fn secant_plane(&self, i: usize) -> u32 {
        self.secant_plane[i - self.affine_keys.len()]
    }

    pub fn point_id_of_vector(&self, v: &[Elem]) -> Option<u32> {
        let v = normalize(self.field(), v)?;
        match self.key_index[encode(self.field(), &v) as usize] {
            u32::MAX => None,
            id => Some(id),
        }
    }

    pub fn point_id(&self, s: &Subspace) -> Option<u32> {
        match s.dim() {
            1 => self.point_id_of_vector(&s.rows()[0]),
            2 => self.secant_index.get(s).copied(),
            _ => None,
        }
    }

    pub fn line_id(&self, s: &Subspace) -> Option<u32> {
        self.line_index.get(s).copied()
    }

    /// Exhaustive for `q <= 7`, otherwise sizes exhaustively and the
    /// transversal axiom on `samples` seeded random pairs.
    pub fn verify(&self, samples: u64) -> GqReport {
        if self.q() <= 7 {
            self.incidence.verify_gq()
        } else {
            self.incidence.verify_gq_sampled(samples, 0x5eed)
        }
    }

    pub fn descriptor(&self) -> GqDescriptor {
        GqDescriptor { schema: "qf/1".into(), q: self.q(), blt: self.blt.to_json() }
    }

    pub fn to_json(&self, with_objects: bool) -> serde_json::Value {
        let f = self.field();
        let mut v = serde_json::to_value(self.descriptor()).expect("serializable");
        v["num_points"] = self.num_points().into();
        v["num_lines"] = self.num_lines().into();
        if with_objects {
            let points: Vec<_> = (0..self.num_points())
                .map(|i| serde_json::json!({"type": self.point_type(i), "subspace": self.point_subspace(i).to_wire(f)}))
                .collect();
            let lines: Vec<_> = (0..self.num_lines())
                .map(|j| serde_json::json!({"type": self.line_type(j), "subspace": self.lines[j].to_wire(f)}))
                .collect();
            v["points"] = points.into();
            v["lines"] = lines.into();
        }
        v
    }

    /// Rebuilds from JSON; stored points and lines, when present, must
    /// match the rebuilt indexing.
    pub fn from_json(v: &serde_json::Value) -> Result<FlockGq> {
        let d: GqDescriptor = serde_json::from_value(v.clone())?;
        let gq = FlockGq::build(BltSet::from_json(&d.blt)?)?;
        if d.q != gq.q() {
            return Err(domain_err!("descriptor q = {} disagrees with BLT-set q = {}", d.q, gq.q()));
        }
        let f = gq.field();
        if let Some(points) = v.get("points").and_then(|p| p.as_array()) {
            if points.len() != gq.num_points() {
                return Err(Error::Verification("stored point count differs".into()));
            }
            for (i, p) in points.iter().enumerate() {
                let rows: Vec<Vec<WireElem>> = serde_json::from_value(p["subspace"].clone())?;
                if Subspace::from_wire(f, &rows)? != gq.point_subspace(i) {
                    return Err(Error::Verification(format!("stored point {i} differs from rebuilt indexing")));
                }
            }
        }
        if let Some(lines) = v.get("lines").and_then(|p| p.as_array()) {
            if lines.len() != gq.num_lines() {
                return Err(Error::Verification("stored line count differs".into()));
            }
            for (j, l) in lines.iter().enumerate() {
                let rows: Vec<Vec<WireElem>> = serde_json::from_value(l["subspace"].clone())?;
                if &Subspace::from_wire(f, &rows)? != gq.line_subspace(j) {
                    return Err(Error::Verification(format!("stored line {j} differs from rebuilt indexing")));
                }
            }
        }
        Ok(gq)
    }

    /// Induced permutations of a semilinear map, checking that it maps the
    /// geometry onto itself and preserves incidence.
    pub fn induced(&self, g: &SemilinearMap) -> Result<Permutation> {
        let f = self.field();
        let mut points = Vec::with_capacity(self.num_points());
        for i in 0..self.num_points() {
            let img = match self.point_vector(i) {
                Some(v) => self.point_id_of_vector(&g.apply(f, &v)),
                None => self.point_id(&g.image(f, &self.point_subspace(i))),
            };
            points.push(img.ok_or_else(|| Error::Verification(format!("point {i} is not mapped to a point")))?);
        }
        let mut lines = Vec::with_capacity(self.num_lines());
        for (j, l) in self.lines.iter().enumerate() {
            let img = self
                .line_id(&g.image(f, l))
                .ok_or_else(|| Error::Verification(format!("line {j} is not mapped to a line")))?;
            lines.push(img);
        }
        let perm = Permutation { points, lines };
        for j in 0..self.num_lines() {
            let mut mapped: Vec<u32> = self.incidence.points_on(j).iter().map(|&p| perm.points[p as usize]).collect();
            mapped.sort_unstable();
            if mapped != self.incidence.points_on(perm.lines[j] as usize) {
                return Err(Error::Verification(format!("incidence not preserved at line {j}")));
            }
        }
        Ok(perm)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GqDescriptor {
    pub schema: String,
    pub q: u32,
    pub blt: serde_json::Value,
}

/// `x -> x^(p^frob) M` on row vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearMap {
    pub matrix: Matrix,
    pub frob: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SemilinearWire {
    pub matrix: Vec<Vec<WireElem>>,
    #[serde(default)]
    pub frob: u32,
}

impl SemilinearMap {
    pub fn linear(matrix: Matrix) -> SemilinearMap {
        SemilinearMap { matrix, frob: 0 }
    }

    pub fn apply(&self, f: &Field, v: &[Elem]) -> Vector {
        let v: Vector = v.iter().map(|&x| f.frobenius(x, self.frob)).collect();
        vec_mat(f, &v, &self.matrix)
    }

    pub fn image(&self, f: &Field, s: &Subspace) -> Subspace {
        s.image(f, &self.matrix, self.frob)
    }

    pub fn to_wire(&self, f: &Field) -> SemilinearWire {
        SemilinearWire {
            matrix: self.matrix.iter().map(|r| r.iter().map(|&x| f.to_wire(x)).collect()).collect(),
            frob: self.frob,
        }
    }

    pub fn from_wire(f: &Field, w: &SemilinearWire) -> Result<SemilinearMap> {
        let matrix: Matrix = w
            .matrix
            .iter()
            .map(|r| r.iter().map(|x| f.from_wire(x)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        Ok(SemilinearMap { matrix, frob: w.frob })
    }

    /// `lambda` with `beta(u^g, v^g) = lambda beta(u, v)^sigma`, if any.
    pub fn similarity_factor(&self, f: &Field, form: &BilinearForm) -> Option<Elem> {
        let g = mat_mul(f, &mat_mul(f, &self.matrix, form_gram(f, form).as_slice()), &transpose(&self.matrix));
        let base = form_gram(f, form);
        let (i, j) = (0..base.len())
            .flat_map(|i| (0..base.len()).map(move |j| (i, j)))
            .find(|&(i, j)| !base[i][j].is_zero())?;
        let lam = f.div(g[i][j], base[i][j])?;
        let ok = g
            .iter()
            .zip(&base)
            .all(|(gr, br)| gr.iter().zip(br).all(|(&x, &y)| x == f.mul(lam, y)));
        (ok && !lam.is_zero()).then_some(lam)
    }
}

fn form_gram(f: &Field, form: &BilinearForm) -> Matrix {
    use crate::linspaces::PolarForm;
    form.gram(f)
}

/// Induced point and line permutations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    pub points: Vec<u32>,
    pub lines: Vec<u32>,
}

/// The Knarr-model elation matrix with parameters `a` in GF(q)^4 and `z`.
pub fn elation(f: &Field, a: &[Elem], z: Elem) -> Matrix {
    // rows 2..5 carry J'^T a^T in the first column
    let jt_a = [f.neg(a[3]), f.neg(a[2]), a[1], a[0]];
    let mut m = crate::linspaces::identity(6);
    for i in 0..4 {
        m[i + 1][0] = jt_a[i];
        m[5][i + 1] = a[i];
    }
    m[5][0] = z;
    m
}

pub fn q_matrix(f: &Field, lambda: Elem) -> Matrix {
    let mut m = crate::linspaces::identity(6);
    m[0][0] = lambda;
    m[5][5] = f.inv(lambda).expect("nonzero");
    m
}

/// `diag(lambda, A, 1)` for a similarity `A J' A^T = lambda J'` of W(3,q).
pub fn r_matrix(f: &Field, a: &[Vector]) -> Result<Matrix> {
    let w = BilinearForm::standard_symplectic(f, 4);
    let lam = SemilinearMap::linear(a.to_vec())
        .similarity_factor(f, &w)
        .ok_or_else(|| domain_err!("matrix is not a similarity of W(3,q)"))?;
    let mut m = vec![vec![Elem::ZERO; 6]; 6];
    m[0][0] = lam;
    for i in 0..4 {
        for j in 0..4 {
            m[i + 1][j + 1] = a[i][j];
        }
    }
    m[5][5] = Elem::ONE;
    Ok(m)
}

#[derive(Clone, Debug)]
pub struct KnarrAutos {
    /// A GF(p)-basis of the elation group: `a` over `GF(p)`-multiples of
    /// `xi^k e_i`, then `z`.
    pub elations: Vec<SemilinearMap>,
    pub q_generator: SemilinearMap,
    /// Present when the Frobenius map stabilizes the BLT-set.
    pub frobenius: Option<SemilinearMap>,
    pub r_generators: Vec<SemilinearMap>,
}

impl KnarrAutos {
    pub fn all(&self) -> Vec<SemilinearMap> {
        let mut v = self.elations.clone();
        v.push(self.q_generator.clone());
        v.extend(self.frobenius.clone());
        v.extend(self.r_generators.iter().cloned());
        v
    }
}

/// Generators of `E`, `Q`, the Frobenius map when it stabilizes `O`, and the
/// `R`-blocks of supplied similarities of W(3,q), each verified on `gq`.
pub fn knarr_autos(gq: &FlockGq, r_candidates: &[Matrix]) -> Result<KnarrAutos> {
    let f = gq.field();
    let mut elations = Vec::new();
    for k in 0..f.degree() as u64 {
        let c = f.exp(k);
        for i in 0..4 {
            let mut a = vec![Elem::ZERO; 4];
            a[i] = c;
            elations.push(SemilinearMap::linear(elation(f, &a, Elem::ZERO)));
        }
        elations.push(SemilinearMap::linear(elation(f, &[Elem::ZERO; 4], c)));
    }
    let q_generator = SemilinearMap::linear(q_matrix(f, f.primitive()));
    let frob = SemilinearMap { matrix: crate::linspaces::identity(6), frob: 1 };
    let frobenius = (f.degree() > 1 && stabilizes_blt(gq, &frob)).then_some(frob);
    let mut r_generators = Vec::new();
    for (i, a) in r_candidates.iter().enumerate() {
        let m = SemilinearMap::linear(r_matrix(f, a)?);
        if !stabilizes_blt(gq, &m) {
            return Err(Error::Verification(format!("candidate {i} does not stabilize the BLT-set")));
        }
        r_generators.push(m);
    }
    let autos = KnarrAutos { elations, q_generator, frobenius, r_generators };
    for g in autos.all() {
        gq.induced(&g)?;
    }
    Ok(autos)
}

fn stabilizes_blt(gq: &FlockGq, g: &SemilinearMap) -> bool {
    let f = gq.field();
    gq.blt_lines().all(|j| gq.line_id(&g.image(f, gq.line_subspace(j))).is_some_and(|k| gq.line_type(k as usize) == LineType::Blt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blt::{blt_build, BltParams, Family};

    fn linear(q: u32) -> FlockGq {
        FlockGq::build(blt_build(Family::Linear, q, BltParams::default()).unwrap()).unwrap()
    }

    #[test]
    fn linear_q3_counts() {
        let gq = linear(3);
        assert_eq!(gq.num_points(), 280);
        assert_eq!(gq.num_lines(), 112);
        let types: Vec<PointType> = (0..280).map(|i| gq.point_type(i)).collect();
        assert_eq!(types.iter().filter(|&&t| t == PointType::Affine).count(), 243);
        assert_eq!(types.iter().filter(|&&t| t == PointType::Secant).count(), 36);
        assert_eq!(gq.num_tangent_lines(), 108);
        let r = gq.verify(0);
        assert!(r.axiom_holds, "{r:?}");
        assert_eq!(r.order, Some((9, 3)));
    }

    #[test]
    fn lines_are_totally_isotropic() {
        let gq = linear(3);
        let f = gq.field();
        for j in 0..gq.num_lines() {
            assert!(crate::linspaces::is_totally_singular(f, gq.line_subspace(j), gq.form()));
        }
        for i in 0..gq.num_points() {
            assert_eq!(gq.point_id(&gq.point_subspace(i)), Some(i as u32));
        }
    }

    #[test]
    fn elations_are_isometries() {
        let f = Field::from_order(5).unwrap();
        let j = BilinearForm::standard_symplectic(&f, 6);
        let a: Vec<Elem> = [1, 2, 3, 4].iter().map(|&x| f.from_int(x)).collect();
        let m = SemilinearMap::linear(elation(&f, &a, f.from_int(2)));
        assert_eq!(m.similarity_factor(&f, &j), Some(Elem::ONE));
        let qm = SemilinearMap::linear(q_matrix(&f, f.primitive()));
        assert_eq!(qm.similarity_factor(&f, &j), Some(Elem::ONE));
    }

    #[test]
    fn json_roundtrip_keeps_indexing() {
        let gq = linear(3);
        let v = gq.to_json(true);
        let back = FlockGq::from_json(&v).unwrap();
        assert_eq!(back.to_json(true), v);
        let mut bad = v.clone();
        let tmp = bad["lines"][0].clone();
        bad["lines"][0] = bad["lines"][1].clone();
        bad["lines"][1] = tmp;
        assert!(FlockGq::from_json(&bad).is_err());
    }
}
