//! BLT-sets of lines of W(3,q): q-clan families, the Q(4,q) models of Fisher
//! and Penttila-Mondello transported through the Klein correspondence, and
//! verification.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{config_err, domain_err, Error, Result};
use crate::extension::Extension;
use crate::field::{prime_power, Elem, Field, WireElem};
use crate::linspaces::{
    all_points, inverse, isometry_between, mat_mul, vec_mat, BilinearForm, Matrix, PointLineGeometry,
    QuadraticForm, Subspace, Vector,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Linear,
    Ftwkb,
    KantorMonomial,
    KantorKnuth,
    Fisher,
    PenttilaMondello,
    Custom,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Linear,
        Family::Ftwkb,
        Family::KantorMonomial,
        Family::KantorKnuth,
        Family::Fisher,
        Family::PenttilaMondello,
        Family::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Linear => "linear",
            Family::Ftwkb => "ftwkb",
            Family::KantorMonomial => "kantor_monomial",
            Family::KantorKnuth => "kantor_knuth",
            Family::Fisher => "fisher",
            Family::PenttilaMondello => "penttila_mondello",
            Family::Custom => "custom",
        }
    }

    /// Whether the family's defining conditions hold at `q`.
    pub fn admissible(self, q: u32) -> bool {
        let Some((p, e)) = prime_power(q) else { return false };
        if p == 2 {
            return false;
        }
        match self {
            Family::Linear | Family::Fisher | Family::Custom => true,
            Family::Ftwkb => q % 3 == 2,
            Family::KantorMonomial => {
                matches!(q % 5, 2 | 3) && Field::from_order(q).is_ok_and(|f| !f.is_square(f.from_int(5)))
            }
            Family::KantorKnuth => e > 1,
            Family::PenttilaMondello => matches!(q % 10, 1 | 9),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        let s = s.replace('-', "_").to_ascii_lowercase();
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| config_err!("unknown BLT family {s:?}"))
    }
}

/// Optional family parameters; unset fields take their defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BltParams {
    /// Nonsquare for the linear and Kantor-Knuth families.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<WireElem>,
    /// Kantor-Knuth automorphism `t -> t^(p^sigma)`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sigma: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub beta: Option<WireElem>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gamma: Option<WireElem>,
}

/// `q + 1` lines of W(3,q) for `x1 y4 - x4 y1 + x2 y3 - x3 y2`, sorted
/// canonically.
#[derive(Clone, Debug)]
pub struct BltSet {
    field: Field,
    pub family: Family,
    pub params: BltParams,
    lines: Vec<Subspace>,
}

#[derive(Serialize, Deserialize)]
struct BltJson {
    q: u32,
    family: Family,
    params: BltParams,
    lines: Vec<Vec<Vec<WireElem>>>,
}

impl BltSet {
    /// Wraps arbitrary lines (no BLT check; see [`verify_blt`]).
    pub fn from_lines(field: Field, family: Family, params: BltParams, lines: Vec<Subspace>) -> Result<BltSet> {
        if lines.iter().any(|l| l.ambient() != 4 || l.dim() != 2) {
            return Err(domain_err!("BLT members must be lines of PG(3,q)"));
        }
        let mut lines = lines;
        lines.sort_by(|a, b| a.cmp_canonical(&field, b));
        Ok(BltSet { field, family, params, lines })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn lines(&self) -> &[Subspace] {
        &self.lines
    }

    /// Copy with member `i` replaced.
    pub fn with_line_replaced(&self, i: usize, line: Subspace) -> BltSet {
        let mut lines = self.lines.clone();
        lines[i] = line;
        let mut out = self.clone();
        out.family = Family::Custom;
        lines.sort_by(|a, b| a.cmp_canonical(&self.field, b));
        out.lines = lines;
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(BltJson {
            q: self.q(),
            family: self.family,
            params: self.params.clone(),
            lines: self.lines.iter().map(|l| l.to_wire(&self.field)).collect(),
        })
        .expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<BltSet> {
        let j: BltJson = serde_json::from_value(v.clone())?;
        let field = Field::from_order(j.q)?;
        let lines = j.lines.iter().map(|l| Subspace::from_wire(&field, l)).collect::<Result<_>>()?;
        BltSet::from_lines(field, j.family, j.params, lines)
    }
}

pub fn w3_form(f: &Field) -> BilinearForm {
    BilinearForm::standard_symplectic(f, 4)
}

/// `l_inf = <(0,0,1,0), (0,0,0,1)>` and `l_t = <(1,0,f_t,t), (0,1,g_t,f_t)>`.
pub fn blt_from_qclan(field: Field, family: Family, params: BltParams, fg: &[(Elem, Elem, Elem)]) -> Result<BltSet> {
    let f = &field;
    let mut lines = vec![Subspace::new(
        f,
        &[
            vec![Elem::ZERO, Elem::ZERO, Elem::ONE, Elem::ZERO],
            vec![Elem::ZERO, Elem::ZERO, Elem::ZERO, Elem::ONE],
        ],
    )?];
    for &(t, ft, gt) in fg {
        lines.push(Subspace::new(
            f,
            &[vec![Elem::ONE, Elem::ZERO, ft, t], vec![Elem::ZERO, Elem::ONE, gt, ft]],
        )?);
    }
    BltSet::from_lines(field, family, params, lines)
}

/// The functions `(t, f_t, g_t)` of a q-clan family.
pub fn qclan_functions(f: &Field, family: Family, params: &BltParams) -> Result<Vec<(Elem, Elem, Elem)>> {
    let q = f.order();
    if !family.admissible(q) {
        return Err(config_err!("family {family} is not defined for q = {q}"));
    }
    let nonsquare = || -> Result<Elem> {
        match &params.n {
            None => Ok(f.least_nonsquare()),
            Some(w) => {
                let n = f.from_wire(w)?;
                if f.is_square(n) {
                    return Err(config_err!("n = {} is a square", f.display(n)));
                }
                Ok(n)
            }
        }
    };
    let c = |num: i64, den: i64| f.div(f.from_int(num), f.from_int(den)).expect("p does not divide den");
    let out = match family {
        Family::Linear => {
            let n = f.neg(nonsquare()?);
            f.elements().map(|t| (t, Elem::ZERO, f.mul(n, t))).collect()
        }
        Family::Ftwkb => {
            let (a, b) = (c(3, 2), f.from_int(3));
            f.elements()
                .map(|t| (t, f.mul(a, f.pow(t, 2)), f.mul(b, f.pow(t, 3))))
                .collect()
        }
        Family::KantorMonomial => {
            let (a, b) = (c(5, 2), f.from_int(5));
            f.elements()
                .map(|t| (t, f.mul(a, f.pow(t, 3)), f.mul(b, f.pow(t, 5))))
                .collect()
        }
        Family::KantorKnuth => {
            let n = f.neg(nonsquare()?);
            let s = params.sigma.unwrap_or(1);
            if s.is_multiple_of(f.degree()) {
                return Err(config_err!("sigma must be a nontrivial automorphism"));
            }
            f.elements().map(|t| (t, Elem::ZERO, f.mul(n, f.frobenius(t, s)))).collect()
        }
        Family::PenttilaMondello if q == 11 => {
            const F: [i64; 11] = [8, 0, 7, 4, 8, 0, 1, 5, 0, 0, 0];
            const G: [i64; 11] = [1, 8, 3, 2, 5, 6, 10, 9, 4, 7, 0];
            (0..11).map(|t| (f.from_int(t), f.from_int(F[t as usize]), f.from_int(G[t as usize]))).collect()
        }
        _ => return Err(config_err!("family {family} has no q-clan representation at q = {q}")),
    };
    Ok(out)
}

/// Builds the BLT-set of a family, through its q-clan when one is
/// available and otherwise through the Q(4,q) model.
pub fn blt_build(family: Family, q: u32, params: BltParams) -> Result<BltSet> {
    let field = Field::from_order(q)?;
    match family {
        Family::Fisher => {
            let model = Q4Model::new(q)?;
            let (pts, params) = blt_q4_points(&model, family, &params)?;
            blt_transport(&model, &pts, family, params)
        }
        Family::PenttilaMondello if q != 11 => {
            let model = Q4Model::new(q)?;
            let (pts, params) = blt_q4_points(&model, family, &params)?;
            blt_transport(&model, &pts, family, params)
        }
        Family::Custom => Err(config_err!("custom BLT-sets are loaded from JSON")),
        _ => {
            let fg = qclan_functions(&field, family, &params)?;
            let mut params = params;
            if matches!(family, Family::Linear | Family::KantorKnuth) && params.n.is_none() {
                params.n = Some(field.to_wire(field.least_nonsquare()));
            }
            if family == Family::KantorKnuth && params.sigma.is_none() {
                params.sigma = Some(1);
            }
            blt_from_qclan(field, family, params, &fg)
        }
    }
}

/// Every (family, q) pair with odd `q <= max_q` for which a BLT-set is
/// built.
pub fn catalogue(max_q: u32) -> Vec<(Family, u32)> {
    let mut out = Vec::new();
    for q in [3u32, 5, 7, 9, 11].into_iter().filter(|&q| q <= max_q) {
        for fam in &Family::ALL[..6] {
            if fam.admissible(q) {
                out.push((*fam, q));
            }
        }
    }
    out
}

/// `GF(q^2) + GF(q^2) + GF(q)` with `(x, y, a) -> x^(q+1) + y^(q+1) + a^2`,
/// in GF(q)-coordinates `(x0, x1, y0, y1, a)` with respect to the basis
/// `1, z` of GF(q^2).
pub struct Q4Model {
    pub ext: Extension,
    pub form: QuadraticForm,
}

impl Q4Model {
    pub fn new(q: u32) -> Result<Q4Model> {
        let (p, e) = prime_power(q).ok_or_else(|| config_err!("{q} is not a prime power"))?;
        let ext = Extension::new(Field::new(p, 2 * e)?, Field::new(p, e)?)?;
        let form = QuadraticForm::from_fn(ext.small(), 5, |v| {
            let x = ext.from_coords(&v[0..2]);
            let y = ext.from_coords(&v[2..4]);
            Q4Model::eval_parts(&ext, x, y, v[4])
        });
        Ok(Q4Model { ext, form })
    }

    fn eval_parts(ext: &Extension, x: Elem, y: Elem, a: Elem) -> Elem {
        let (big, small) = (ext.big(), ext.small());
        let q = small.order() as u64;
        let s = big.add(big.pow(x, q + 1), big.pow(y, q + 1));
        let s = big.restrict(small, s).expect("norms lie in GF(q)");
        small.add(s, small.mul(a, a))
    }

    pub fn eval(&self, x: Elem, y: Elem, a: Elem) -> Elem {
        Q4Model::eval_parts(&self.ext, x, y, a)
    }

    pub fn coords(&self, x: Elem, y: Elem, a: Elem) -> Vector {
        let mut v = self.ext.to_coords(x);
        v.extend(self.ext.to_coords(y));
        v.push(a);
        v
    }
}

/// The Fisher or Penttila-Mondello point set, with `beta` (and `gamma`)
/// the solutions of least GAP rank unless supplied.
pub fn blt_q4_points(model: &Q4Model, family: Family, params: &BltParams) -> Result<(Vec<Vector>, BltParams)> {
    let (big, small) = (model.ext.big(), model.ext.small());
    let q = small.order();
    let norm = |x: Elem| big.pow(x, q as u64 + 1);
    let pick = |target: Elem, given: &Option<WireElem>| -> Result<Elem> {
        let target = big.embed(small, target)?;
        match given {
            Some(w) => {
                let b = big.from_wire(w)?;
                if norm(b) != target {
                    return Err(config_err!("supplied element has the wrong norm"));
                }
                Ok(b)
            }
            None => Ok(big
                .elements_gap_order()
                .find(|&b| norm(b) == target)
                .expect("the norm map is onto")),
        }
    };
    let circle: Vec<Elem> = big.nonzero().filter(|&x| norm(x) == Elem::ONE).collect();
    let mut out = BltParams::default();
    let mut pts: Vec<Vector> = Vec::new();
    match family {
        Family::Fisher => {
            let beta = pick(small.from_int(-1), &params.beta)?;
            out.beta = Some(big.to_wire(beta));
            let mut sq: Vec<Elem> = circle.iter().map(|&x| big.mul(beta, big.mul(x, x))).collect();
            sq.sort_unstable();
            sq.dedup();
            for &s in &sq {
                pts.push(model.coords(s, Elem::ZERO, Elem::ONE));
            }
            for &s in &sq {
                pts.push(model.coords(Elem::ZERO, s, Elem::ONE));
            }
        }
        Family::PenttilaMondello => {
            if !family.admissible(q) {
                return Err(config_err!("penttila_mondello needs q = +-1 mod 10, got {q}"));
            }
            let c = |n: i64| small.div(small.from_int(n), small.from_int(5)).expect("5 is a unit");
            let beta = pick(c(-4), &params.beta)?;
            let gamma = pick(c(-1), &params.gamma)?;
            out.beta = Some(big.to_wire(beta));
            out.gamma = Some(big.to_wire(gamma));
            for &x in &circle {
                let a = big.mul(beta, big.pow(x, 2));
                let b = big.mul(gamma, big.pow(x, 3));
                pts.push(model.coords(a, b, Elem::ONE));
            }
        }
        _ => return Err(config_err!("family {family} has no quadric model here")),
    }
    Ok((pts, out))
}

/// Plucker coordinates `(p01, p02, p03, p13, p23)` of a line of W(3,q);
/// `p12 = -p03` holds for totally isotropic lines.
pub fn plucker(f: &Field, line: &Subspace) -> Vector {
    let (u, v) = (&line.rows()[0], &line.rows()[1]);
    let p = |i: usize, j: usize| f.sub(f.mul(u[i], v[j]), f.mul(u[j], v[i]));
    vec![p(0, 1), p(0, 2), p(0, 3), p(1, 3), p(2, 3)]
}

/// `p01 p23 - p02 p13 - p03^2`, the Klein quadric restricted to the
/// hyperplane `p03 + p12 = 0`.
pub fn plucker_form(f: &Field) -> QuadraticForm {
    let mut c = vec![vec![Elem::ZERO; 5]; 5];
    c[0][4] = Elem::ONE;
    c[1][3] = f.from_int(-1);
    c[2][2] = f.from_int(-1);
    QuadraticForm::new(c)
}

/// The totally isotropic line with the given Plucker section coordinates.
pub fn line_from_plucker(f: &Field, y: &[Elem]) -> Result<Subspace> {
    if !plucker_form(f).eval(f, y).is_zero() || y.iter().all(|x| x.is_zero()) {
        return Err(domain_err!("not a singular point of the Plucker section"));
    }
    let mut p = [[Elem::ZERO; 4]; 4];
    let set = |p: &mut [[Elem; 4]; 4], i: usize, j: usize, v: Elem| {
        p[i][j] = v;
        p[j][i] = f.neg(v);
    };
    set(&mut p, 0, 1, y[0]);
    set(&mut p, 0, 2, y[1]);
    set(&mut p, 0, 3, y[2]);
    set(&mut p, 1, 2, f.neg(y[2]));
    set(&mut p, 1, 3, y[3]);
    set(&mut p, 2, 3, y[4]);
    let on: Vec<Vector> = all_points(f, 4)
        .into_iter()
        .filter(|v| {
            [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)].iter().all(|&(i, j, k)| {
                let s = f.add(f.sub(f.mul(v[i], p[j][k]), f.mul(v[j], p[i][k])), f.mul(v[k], p[i][j]));
                s.is_zero()
            })
        })
        .collect();
    let line = Subspace::new(f, &on)?;
    if line.dim() != 2 {
        return Err(domain_err!("Plucker point does not determine a line"));
    }
    Ok(line)
}

/// Maps singular points of the model quadric to lines of W(3,q).
pub fn blt_transport(model: &Q4Model, points: &[Vector], family: Family, params: BltParams) -> Result<BltSet> {
    let f = model.ext.small();
    if let Some(x) = points.iter().find(|x| !model.form.eval(f, x).is_zero()) {
        return Err(domain_err!("point {:?} is not singular", x.iter().map(|&e| f.display(e)).collect::<Vec<_>>()));
    }
    let (m, _) = isometry_between(f, &model.form, &plucker_form(f))?;
    let lines = points
        .iter()
        .map(|x| line_from_plucker(f, &vec_mat(f, x, &m)))
        .collect::<Result<Vec<_>>>()?;
    BltSet::from_lines(f.clone(), family, params, lines)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BltReport {
    pub q: u32,
    pub num_lines: usize,
    pub totally_isotropic: bool,
    pub pairwise_disjoint: bool,
    /// No line of W(3,q) meets more than two members.
    pub direct: bool,
    pub direct_witness: Option<String>,
    /// Every pairwise difference form of the normalized q-clan is anisotropic.
    pub anisotropic: bool,
    pub anisotropic_witness: Option<String>,
    #[serde(skip)]
    pub witness_line: Option<Subspace>,
}

impl BltReport {
    pub fn passed(&self) -> bool {
        self.num_lines == self.q as usize + 1
            && self.totally_isotropic
            && self.pairwise_disjoint
            && self.direct
            && self.anisotropic
    }

    pub fn agree(&self) -> bool {
        self.direct == self.anisotropic
    }
}

pub fn verify_blt(b: &BltSet) -> Result<BltReport> {
    let f = b.field();
    let j = w3_form(f);
    let geo = PointLineGeometry::polar(f, &j)?;
    let totally_isotropic = b.lines().iter().all(|l| crate::linspaces::is_totally_singular(f, l, &j));

    let mut owner: Vec<Option<usize>> = vec![None; geo.points.len()];
    let mut pairwise_disjoint = true;
    for (i, l) in b.lines().iter().enumerate() {
        for x in l.points(f) {
            let id = geo.point_id(f, &x).expect("points of t.i. lines are in W(3,q)") as usize;
            if owner[id].is_some() {
                pairwise_disjoint = false;
            }
            owner[id] = Some(i);
        }
    }

    let mut direct = true;
    let mut direct_witness = None;
    let mut witness_line = None;
    for (li, line) in geo.lines.iter().enumerate() {
        let mut met: Vec<usize> = geo.incidence.points_on(li).iter().filter_map(|&p| owner[p as usize]).collect();
        met.sort_unstable();
        met.dedup();
        if met.len() > 2 {
            direct = false;
            direct_witness = Some(format!("line {:?} meets members {met:?}", display_rows(f, line.rows())));
            witness_line = Some(line.clone());
            break;
        }
    }

    let (anisotropic, anisotropic_witness) = match normalized_qclan(f, b.lines()) {
        Ok(fg) => check_anisotropy(f, &fg),
        Err(e) => (false, Some(e.to_string())),
    };

    Ok(BltReport {
        q: b.q(),
        num_lines: b.lines().len(),
        totally_isotropic,
        pairwise_disjoint,
        direct,
        direct_witness,
        anisotropic,
        anisotropic_witness,
        witness_line,
    })
}

fn display_rows(f: &Field, rows: &[Vector]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(|&x| f.display(x)).collect()).collect()
}

/// Writes all members but one as `<(1,0,f,t), (0,1,g,f)>` after a
/// symplectic change of basis sending one member to `<e3, e4>`. The
/// identity is used when `<e3, e4>` is already a member and the rest have
/// that shape.
pub fn normalized_qclan(f: &Field, lines: &[Subspace]) -> Result<Vec<(Elem, Elem, Elem)>> {
    if lines.len() < 2 {
        return Err(domain_err!("need at least two lines"));
    }
    let inf = Subspace::new(
        f,
        &[
            vec![Elem::ZERO, Elem::ZERO, Elem::ONE, Elem::ZERO],
            vec![Elem::ZERO, Elem::ZERO, Elem::ZERO, Elem::ONE],
        ],
    )?;
    if let Some(fg) = read_qclan(lines, &inf) {
        return Ok(fg);
    }
    let j = w3_form(f);
    let l_inf = &lines[0];
    let l_0 = &lines[1];
    if l_inf.meet_dim(f, l_0) > 0 {
        return Err(domain_err!("members 0 and 1 meet"));
    }
    let (a1, a2) = (&l_0.rows()[0], &l_0.rows()[1]);
    let (c1, c2) = (&l_inf.rows()[0], &l_inf.rows()[1]);
    // pairing matrix between l_0 and l_inf
    let pair = vec![vec![j.eval(f, a1, c1), j.eval(f, a1, c2)], vec![j.eval(f, a2, c1), j.eval(f, a2, c2)]];
    let pinv = inverse(f, &pair).ok_or_else(|| domain_err!("members 0 and 1 are not opposite"))?;
    // b = s c1 + r c2 with pair (s, r)^T = target
    let solve = |t0: Elem, t1: Elem| -> Vector {
        let sr = vec_mat(f, &[t0, t1], &crate::linspaces::transpose(&pinv));
        crate::linspaces::axpy(f, sr[0], c1, &crate::linspaces::scale(f, sr[1], c2))
    };
    let e4 = solve(Elem::ONE, Elem::ZERO);
    let e3 = solve(Elem::ZERO, Elem::ONE);
    let m: Matrix = vec![a1.clone(), a2.clone(), e3, e4];
    let minv = inverse(f, &m).expect("basis");
    let moved: Vec<Subspace> = lines
        .iter()
        .map(|l| Subspace::new(f, &mat_mul(f, l.rows(), &minv)))
        .collect::<Result<_>>()?;
    read_qclan(&moved, &inf).ok_or_else(|| domain_err!("a member meets the first member"))
}

fn read_qclan(lines: &[Subspace], inf: &Subspace) -> Option<Vec<(Elem, Elem, Elem)>> {
    if !lines.contains(inf) {
        return None;
    }
    lines
        .iter()
        .filter(|l| *l != inf)
        .map(|l| {
            let r = l.rows();
            let shaped = r[0][0] == Elem::ONE
                && r[0][1].is_zero()
                && r[1][0].is_zero()
                && r[1][1] == Elem::ONE
                && r[0][2] == r[1][3];
            shaped.then(|| (r[0][3], r[0][2], r[1][2]))
        })
        .collect()
}

/// `(t-u) x^2 + 2 (f_t - f_u) x y + (g_t - g_u) y^2` has no nontrivial zero
/// for every pair, by exhaustive evaluation.
pub fn check_anisotropy(f: &Field, fg: &[(Elem, Elem, Elem)]) -> (bool, Option<String>) {
    let two = f.from_int(2);
    for (i, &(t, ft, gt)) in fg.iter().enumerate() {
        for &(u, fu, gu) in &fg[i + 1..] {
            let a = f.sub(t, u);
            let b = f.mul(two, f.sub(ft, fu));
            let c = f.sub(gt, gu);
            for x in f.elements() {
                for y in f.elements() {
                    if x.is_zero() && y.is_zero() {
                        continue;
                    }
                    let v = f.add(f.add(f.mul(a, f.mul(x, x)), f.mul(b, f.mul(x, y))), f.mul(c, f.mul(y, y)));
                    if v.is_zero() {
                        return (
                            false,
                            Some(format!(
                                "t = {}, u = {}: form vanishes at ({}, {})",
                                f.display(t),
                                f.display(u),
                                f.display(x),
                                f.display(y)
                            )),
                        );
                    }
                }
            }
        }
    }
    (true, None)
}

/// Histogram (indexed by GAP rank) of `B(x,y)B(z,w) / (B(x,z)B(y,w))` over
/// ordered 4-tuples of distinct Plucker images, minimized over the Galois
/// group. Equal for BLT-sets equivalent under the semisimilarity group.
pub fn fingerprint(b: &BltSet) -> Vec<u64> {
    let f = b.field();
    let g = plucker_form(f).polar_gram(f);
    let pts: Vec<Vector> = b.lines().iter().map(|l| plucker(f, l)).collect();
    let n = pts.len();
    let mut gram = vec![vec![Elem::ZERO; n]; n];
    for i in 0..n {
        let xi = vec_mat(f, &pts[i], &g);
        for j in 0..n {
            gram[i][j] = crate::linspaces::dot(f, &xi, &pts[j]);
        }
    }
    let mut hist = vec![0u64; f.order() as usize];
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    if x == y || x == z || x == w || y == z || y == w || z == w {
                        continue;
                    }
                    let num = f.mul(gram[x][y], gram[z][w]);
                    let den = f.mul(gram[x][z], gram[y][w]);
                    let r = f.div(num, den).unwrap_or(Elem::ZERO);
                    hist[f.gap_rank(r) as usize] += 1;
                }
            }
        }
    }
    (0..f.degree())
        .map(|k| {
            let mut h = vec![0u64; hist.len()];
            for (rank, &c) in hist.iter().enumerate() {
                let x = f.frobenius(f.from_gap_rank(rank as u32), k);
                h[f.gap_rank(x) as usize] += c;
            }
            h
        })
        .min()
        .expect("degree >= 1")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_roundtrip() {
        for fam in Family::ALL {
            assert_eq!(fam.name().parse::<Family>().unwrap(), fam);
        }
        assert_eq!("kantor-knuth".parse::<Family>().unwrap(), Family::KantorKnuth);
        assert!("nope".parse::<Family>().is_err());
    }

    #[test]
    fn admissibility() {
        assert!(Family::Ftwkb.admissible(5) && Family::Ftwkb.admissible(11));
        assert!(!Family::Ftwkb.admissible(7));
        assert!(Family::KantorMonomial.admissible(3) && Family::KantorMonomial.admissible(7));
        assert!(!Family::KantorMonomial.admissible(5) && !Family::KantorMonomial.admissible(11));
        assert!(Family::KantorKnuth.admissible(9) && !Family::KantorKnuth.admissible(7));
        assert!(Family::PenttilaMondello.admissible(9) && Family::PenttilaMondello.admissible(11));
        assert!(!Family::PenttilaMondello.admissible(7));
    }

    #[test]
    fn linear_q3_shape() {
        let b = blt_build(Family::Linear, 3, BltParams::default()).unwrap();
        let f = b.field();
        assert_eq!(b.lines().len(), 4);
        // n = 2 is the only nonsquare, g_t = -2t = t
        let l1 = Subspace::new(f, &[
            vec![Elem::ONE, Elem::ZERO, Elem::ZERO, Elem::ONE],
            vec![Elem::ZERO, Elem::ONE, Elem::ONE, Elem::ZERO],
        ])
        .unwrap();
        assert!(b.lines().contains(&l1));
    }

    #[test]
    fn ftwkb_q5_value() {
        let f = Field::from_order(5).unwrap();
        let fg = qclan_functions(&f, Family::Ftwkb, &BltParams::default()).unwrap();
        assert_eq!(fg[2].1, Elem(1));
    }

    #[test]
    fn ftwkb_q7_rejected() {
        assert!(matches!(blt_build(Family::Ftwkb, 7, BltParams::default()), Err(Error::Config(_))));
    }

    #[test]
    fn plucker_roundtrip_linear_q3() {
        let b = blt_build(Family::Linear, 3, BltParams::default()).unwrap();
        let f = b.field();
        for l in b.lines() {
            let y = plucker(f, l);
            assert!(plucker_form(f).eval(f, &y).is_zero());
            assert_eq!(&line_from_plucker(f, &y).unwrap(), l);
        }
    }

    #[test]
    fn fisher_q3_points() {
        let model = Q4Model::new(3).unwrap();
        let (pts, _) = blt_q4_points(&model, Family::Fisher, &BltParams::default()).unwrap();
        assert_eq!(pts.len(), 4);
        for x in &pts {
            assert!(model.form.eval(model.ext.small(), x).is_zero());
        }
    }

    #[test]
    fn linear_q3_verifies() {
        let b = blt_build(Family::Linear, 3, BltParams::default()).unwrap();
        let r = verify_blt(&b).unwrap();
        assert!(r.passed() && r.agree(), "{r:?}");
    }
}
