//! Vectors, matrices and canonical subspaces over GF(q); bilinear and
//! quadratic forms; totally isotropic / singular subspace enumeration.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{domain_err, Error, Result};
use crate::extension::Extension;
use crate::field::{prime_power, Elem, Field, WireElem};
use crate::incidence::IncidenceStructure;

pub type Vector = Vec<Elem>;
pub type Matrix = Vec<Vector>;

pub fn dot(f: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter().zip(b).fold(Elem::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// Row vector times matrix.
pub fn vec_mat(f: &Field, v: &[Elem], m: &[Vector]) -> Vector {
    let cols = m.first().map_or(0, Vec::len);
    let mut out = vec![Elem::ZERO; cols];
    for (&c, row) in v.iter().zip(m) {
        if c.is_zero() {
            continue;
        }
        for (o, &r) in out.iter_mut().zip(row) {
            *o = f.add(*o, f.mul(c, r));
        }
    }
    out
}

pub fn mat_mul(f: &Field, a: &[Vector], b: &[Vector]) -> Matrix {
    a.iter().map(|row| vec_mat(f, row, b)).collect()
}

pub fn transpose(m: &[Vector]) -> Matrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }).collect())
        .collect()
}

pub fn scale(f: &Field, c: Elem, v: &[Elem]) -> Vector {
    v.iter().map(|&x| f.mul(c, x)).collect()
}

pub fn axpy(f: &Field, c: Elem, x: &[Elem], y: &[Elem]) -> Vector {
    x.iter().zip(y).map(|(&a, &b)| f.add(f.mul(c, a), b)).collect()
}

/// Scales `v` so its first nonzero entry is 1; `None` for the zero vector.
pub fn normalize(f: &Field, v: &[Elem]) -> Option<Vector> {
    let lead = *v.iter().find(|x| !x.is_zero())?;
    let inv = f.inv(lead)?;
    Some(scale(f, inv, v))
}

/// Reduced row echelon form with unit pivots, zero rows dropped; rows are
/// ordered by pivot column.
pub fn rref(f: &Field, rows: &[Vector]) -> Matrix {
    let mut m: Matrix = rows.to_vec();
    let n = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..n {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let inv = f.inv(m[r][c]).expect("nonzero pivot");
        m[r] = scale(f, inv, &m[r]);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let factor = f.neg(m[i][c]);
                m[i] = axpy(f, factor, &m[r], &m[i]);
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    m
}

pub fn rank(f: &Field, rows: &[Vector]) -> usize {
    rref(f, rows).len()
}

/// Basis of `{v : rows . v^T = 0}` inside GF(q)^n.
pub fn nullspace(f: &Field, rows: &[Vector], n: usize) -> Matrix {
    let r = rref(f, rows);
    let pivots: Vec<usize> = r
        .iter()
        .map(|row| row.iter().position(|x| !x.is_zero()).expect("nonzero row"))
        .collect();
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Elem::ZERO; n];
        v[free] = Elem::ONE;
        for (row, &pc) in r.iter().zip(&pivots) {
            v[pc] = f.neg(row[free]);
        }
        basis.push(v);
    }
    basis
}

/// Inverse of a square matrix, if invertible.
pub fn inverse(f: &Field, m: &[Vector]) -> Option<Matrix> {
    let n = m.len();
    let aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }));
            r
        })
        .collect();
    let red = rref(f, &aug);
    if red.len() < n || (0..n).any(|i| red[i][i] != Elem::ONE) {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Lexicographic comparison of equally shaped matrices, row by row, entries
/// compared by GAP rank.
pub fn cmp_matrices(f: &Field, a: &[Vector], b: &[Vector]) -> Ordering {
    for (ra, rb) in a.iter().zip(b) {
        for (&x, &y) in ra.iter().zip(rb) {
            match f.gap_rank(x).cmp(&f.gap_rank(y)) {
                Ordering::Equal => {}
                o => return o,
            }
        }
    }
    a.len().cmp(&b.len())
}

/// A subspace of GF(q)^n stored by its reduced echelon matrix, which is
/// unique: two subspaces are equal iff their matrices are identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    n: usize,
    rows: Matrix,
}

impl Subspace {
    /// Canonical form of the row space of a nonzero matrix.
    pub fn new(f: &Field, rows: &[Vector]) -> Result<Subspace> {
        let s = Self::span(f, rows)?;
        if s.dim() == 0 {
            return Err(domain_err!("zero matrix spans no projective subspace"));
        }
        Ok(s)
    }

    /// Row space, allowing the zero subspace.
    pub fn span(f: &Field, rows: &[Vector]) -> Result<Subspace> {
        let n = rows.first().map(Vec::len).ok_or_else(|| domain_err!("empty row list"))?;
        if rows.iter().any(|r| r.len() != n) {
            return Err(domain_err!("rows of unequal length"));
        }
        Ok(Subspace { n, rows: rref(f, rows) })
    }

    pub fn zero(n: usize) -> Subspace {
        Subspace { n, rows: Vec::new() }
    }

    pub fn whole(n: usize) -> Subspace {
        Subspace { n, rows: identity(n) }
    }

    pub fn point(f: &Field, v: &[Elem]) -> Result<Subspace> {
        Self::new(f, &[v.to_vec()])
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn contains_vector(&self, f: &Field, v: &[Elem]) -> bool {
        let mut m = self.rows.clone();
        m.push(v.to_vec());
        rank(f, &m) == self.dim()
    }

    pub fn contains(&self, f: &Field, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains_vector(f, r))
    }

    pub fn join(&self, f: &Field, other: &Subspace) -> Subspace {
        let mut m = self.rows.clone();
        m.extend(other.rows.iter().cloned());
        if m.is_empty() {
            return Subspace::zero(self.n);
        }
        Subspace { n: self.n, rows: rref(f, &m) }
    }

    pub fn meet(&self, f: &Field, other: &Subspace) -> Subspace {
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.n);
        }
        // left kernel of the stacked rows gives the relations a.U = b.W
        let mut stacked = self.rows.clone();
        stacked.extend(other.rows.iter().cloned());
        let rel = nullspace(f, &transpose(&stacked), stacked.len());
        let vecs: Matrix = rel.iter().map(|c| vec_mat(f, &c[..self.dim()], &self.rows)).collect();
        if vecs.is_empty() {
            return Subspace::zero(self.n);
        }
        Subspace { n: self.n, rows: rref(f, &vecs) }
    }

    pub fn meet_dim(&self, f: &Field, other: &Subspace) -> usize {
        self.dim() + other.dim() - self.join(f, other).dim()
    }

    /// The image under `x -> x^(p^frob) M`.
    pub fn image(&self, f: &Field, m: &[Vector], frob: u32) -> Subspace {
        let rows: Matrix = self
            .rows
            .iter()
            .map(|r| {
                let r: Vector = r.iter().map(|&x| f.frobenius(x, frob)).collect();
                vec_mat(f, &r, m)
            })
            .collect();
        Subspace { n: self.n, rows: rref(f, &rows) }
    }

    /// Projective points, each as a normalized vector, in GAP order.
    pub fn points(&self, f: &Field) -> Vec<Vector> {
        let k = self.dim();
        let mut out = Vec::new();
        for lead in 0..k {
            let free = k - lead - 1;
            let total = (f.order() as u64).pow(free as u32);
            for code in 0..total {
                let mut coeffs = vec![Elem::ZERO; k];
                coeffs[lead] = Elem::ONE;
                let mut c = code;
                for slot in coeffs[lead + 1..].iter_mut() {
                    *slot = Elem((c % f.order() as u64) as u32);
                    c /= f.order() as u64;
                }
                let v = vec_mat(f, &coeffs, &self.rows);
                out.push(normalize(f, &v).expect("independent rows"));
            }
        }
        out.sort_by(|a, b| cmp_vectors(f, a, b));
        out
    }

    pub fn cmp_canonical(&self, f: &Field, other: &Subspace) -> Ordering {
        self.dim().cmp(&other.dim()).then_with(|| cmp_matrices(f, &self.rows, &other.rows))
    }

    pub fn to_wire(&self, f: &Field) -> Vec<Vec<WireElem>> {
        self.rows.iter().map(|r| r.iter().map(|&x| f.to_wire(x)).collect()).collect()
    }

    pub fn from_wire(f: &Field, rows: &[Vec<WireElem>]) -> Result<Subspace> {
        let m: Matrix = rows
            .iter()
            .map(|r| r.iter().map(|w| f.from_wire(w)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        Subspace::new(f, &m)
    }
}

pub fn cmp_vectors(f: &Field, a: &[Elem], b: &[Elem]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| f.gap_rank(x).cmp(&f.gap_rank(y)))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// All projective points of PG(n-1, q) as normalized vectors, in GAP order.
pub fn all_points(f: &Field, n: usize) -> Vec<Vector> {
    Subspace::whole(n).points(f)
}

/// Parses a matrix given as rows of integers separated by `;`, e.g.
/// `"0 1 0 1 0 0; 0 0 1 1 1 0"`. Integers are prime-field values; for
/// non-prime fields an entry `zK` means the K-th power of the primitive
/// element.
pub fn parse_matrix(f: &Field, s: &str) -> Result<Matrix> {
    s.split(';')
        .map(|row| {
            row.split_whitespace()
                .map(|tok| parse_elem(f, tok))
                .collect::<Result<Vector>>()
        })
        .filter(|r| r.as_ref().map_or(true, |v| !v.is_empty()))
        .collect()
}

pub fn parse_elem(f: &Field, tok: &str) -> Result<Elem> {
    let tok = tok.trim();
    if let Some(k) = tok.strip_prefix("z^").or_else(|| tok.strip_prefix('z')) {
        let k: u64 = k.parse().map_err(|_| domain_err!("bad element token {tok:?}"))?;
        return Ok(f.exp(k));
    }
    let v: i64 = tok.parse().map_err(|_| domain_err!("bad element token {tok:?}"))?;
    Ok(f.from_int(v))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormKind {
    Symplectic,
    Symmetric,
}

/// A nondegenerate bilinear form `B(x, y) = x G y^T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    gram: Matrix,
    kind: FormKind,
}

impl BilinearForm {
    pub fn new(f: &Field, gram: Matrix, kind: FormKind) -> Result<BilinearForm> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(domain_err!("Gram matrix must be square"));
        }
        for i in 0..n {
            for j in 0..n {
                let ok = match kind {
                    FormKind::Symplectic => gram[i][j] == f.neg(gram[j][i]) && (i != j || gram[i][i].is_zero()),
                    FormKind::Symmetric => gram[i][j] == gram[j][i],
                };
                if !ok {
                    return Err(domain_err!("Gram matrix is not {kind:?} at ({i},{j})"));
                }
            }
        }
        if rank(f, &gram) != n {
            return Err(domain_err!("form is degenerate"));
        }
        Ok(BilinearForm { gram, kind })
    }

    /// `x_1 y_n - x_n y_1 + x_2 y_{n-1} - x_{n-1} y_2 + ...`: the form with
    /// anti-diagonal Gram matrix `(1, ..., 1, -1, ..., -1)`.
    pub fn standard_symplectic(f: &Field, n: usize) -> BilinearForm {
        assert!(n.is_multiple_of(2) && n > 0);
        let mut g = vec![vec![Elem::ZERO; n]; n];
        for (i, row) in g.iter_mut().enumerate() {
            row[n - 1 - i] = if i < n / 2 { Elem::ONE } else { f.from_int(-1) };
        }
        BilinearForm { gram: g, kind: FormKind::Symplectic }
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn eval(&self, f: &Field, x: &[Elem], y: &[Elem]) -> Elem {
        dot(f, &vec_mat(f, x, &self.gram), y)
    }
}

/// `Q(x) = sum_{i <= j} c_ij x_i x_j`, stored as an upper-triangular matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    coeffs: Matrix,
}

impl QuadraticForm {
    pub fn new(coeffs: Matrix) -> QuadraticForm {
        let n = coeffs.len();
        let coeffs = (0..n)
            .map(|i| (0..n).map(|j| if j >= i { coeffs[i][j] } else { Elem::ZERO }).collect())
            .collect();
        QuadraticForm { coeffs }
    }

    pub fn diagonal(d: &[Elem]) -> QuadraticForm {
        let n = d.len();
        QuadraticForm::new(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { d[i] } else { Elem::ZERO }).collect())
                .collect(),
        )
    }

    /// Recovers the coefficients of a function known to be a quadratic form.
    pub fn from_fn(f: &Field, n: usize, q: impl Fn(&[Elem]) -> Elem) -> QuadraticForm {
        let e = identity(n);
        let mut c = vec![vec![Elem::ZERO; n]; n];
        for i in 0..n {
            c[i][i] = q(&e[i]);
        }
        for i in 0..n {
            for j in i + 1..n {
                let s: Vector = e[i].iter().zip(&e[j]).map(|(&a, &b)| f.add(a, b)).collect();
                c[i][j] = f.sub(f.sub(q(&s), c[i][i]), c[j][j]);
            }
        }
        QuadraticForm::new(c)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Vector] {
        &self.coeffs
    }

    pub fn eval(&self, f: &Field, x: &[Elem]) -> Elem {
        let mut acc = Elem::ZERO;
        for (i, row) in self.coeffs.iter().enumerate() {
            if x[i].is_zero() {
                continue;
            }
            let mut s = Elem::ZERO;
            for j in i..row.len() {
                s = f.add(s, f.mul(row[j], x[j]));
            }
            acc = f.add(acc, f.mul(x[i], s));
        }
        acc
    }

    /// Gram matrix of `B(x, y) = Q(x + y) - Q(x) - Q(y)`.
    pub fn polar_gram(&self, f: &Field) -> Matrix {
        let n = self.dim();
        let mut g = vec![vec![Elem::ZERO; n]; n];
        for i in 0..n {
            for j in 0..n {
                g[i][j] = match i.cmp(&j) {
                    Ordering::Equal => f.add(self.coeffs[i][i], self.coeffs[i][i]),
                    Ordering::Less => self.coeffs[i][j],
                    Ordering::Greater => self.coeffs[j][i],
                };
            }
        }
        g
    }

    /// `Q(x M)` as a form in `x`.
    pub fn transform(&self, f: &Field, m: &[Vector]) -> QuadraticForm {
        QuadraticForm::from_fn(f, self.dim(), |x| self.eval(f, &vec_mat(f, x, m)))
    }
}

/// Forms defining a polar space: a Gram matrix for perpendicularity plus a
/// singularity test for vectors.
pub trait PolarForm {
    fn ambient(&self) -> usize;
    fn gram(&self, f: &Field) -> Matrix;
    fn is_singular(&self, f: &Field, x: &[Elem]) -> bool;
}

impl PolarForm for BilinearForm {
    fn ambient(&self) -> usize {
        self.gram.len()
    }
    fn gram(&self, _f: &Field) -> Matrix {
        self.gram.clone()
    }
    fn is_singular(&self, f: &Field, x: &[Elem]) -> bool {
        match self.kind {
            FormKind::Symplectic => true,
            FormKind::Symmetric => self.eval(f, x, x).is_zero(),
        }
    }
}

impl PolarForm for QuadraticForm {
    fn ambient(&self) -> usize {
        self.dim()
    }
    fn gram(&self, f: &Field) -> Matrix {
        self.polar_gram(f)
    }
    fn is_singular(&self, f: &Field, x: &[Elem]) -> bool {
        self.eval(f, x).is_zero()
    }
}

/// `U^perp` with respect to the form's Gram matrix.
pub fn perp(f: &Field, u: &Subspace, form: &dyn PolarForm) -> Result<Subspace> {
    let n = form.ambient();
    if u.ambient() != n {
        return Err(domain_err!("subspace lives in dimension {}, form in {n}", u.ambient()));
    }
    if u.dim() == 0 {
        return Ok(Subspace::whole(n));
    }
    let g = form.gram(f);
    let rows = mat_mul(f, u.rows(), &g);
    let basis = nullspace(f, &rows, n);
    if basis.is_empty() {
        return Ok(Subspace::zero(n));
    }
    Subspace::span(f, &basis)
}

pub fn is_totally_singular(f: &Field, u: &Subspace, form: &dyn PolarForm) -> bool {
    let g = form.gram(f);
    let rows = u.rows();
    rows.iter().all(|r| form.is_singular(f, r))
        && rows.iter().enumerate().all(|(i, a)| {
            let ag = vec_mat(f, a, &g);
            rows[i + 1..].iter().all(|b| dot(f, &ag, b).is_zero())
        })
}

/// All totally isotropic (symplectic) or totally singular (quadratic)
/// subspaces of dimension `k`, optionally containing `containing` and lying
/// inside `inside`, sorted canonically.
///
/// Built by extension: each subspace of the previous dimension is extended
/// by singular points of its perp, duplicates removed by canonical form.
pub fn isotropic_subspaces(
    f: &Field,
    form: &dyn PolarForm,
    k: usize,
    containing: Option<&Subspace>,
    inside: Option<&Subspace>,
) -> Result<Vec<Subspace>> {
    let n = form.ambient();
    let whole = Subspace::whole(n);
    let inside = inside.unwrap_or(&whole);
    let mut layer: Vec<Subspace> = match containing {
        Some(s) => {
            if !is_totally_singular(f, s, form) || !inside.contains(f, s) {
                return Ok(Vec::new());
            }
            vec![s.clone()]
        }
        None => vec![Subspace::zero(n)],
    };
    let start = layer[0].dim();
    if k < start {
        return Ok(Vec::new());
    }
    for _ in start..k {
        let mut next: HashSet<Subspace> = HashSet::new();
        for u in &layer {
            let room = perp(f, u, form)?.meet(f, inside);
            if room.dim() == 0 {
                continue;
            }
            for x in room.points(f) {
                if u.dim() > 0 && u.contains_vector(f, &x) {
                    continue;
                }
                if !form.is_singular(f, &x) {
                    continue;
                }
                let mut rows = u.rows().to_vec();
                rows.push(x);
                next.insert(Subspace::new(f, &rows)?);
            }
        }
        layer = next.into_iter().collect();
        if layer.is_empty() {
            break;
        }
    }
    layer.sort_by(|a, b| a.cmp_canonical(f, b));
    Ok(layer)
}

/// Singular points and totally singular lines of a polar space with incidence.
pub struct PointLineGeometry {
    pub points: Vec<Vector>,
    pub lines: Vec<Subspace>,
    pub incidence: IncidenceStructure,
    point_index: HashMap<Vector, u32>,
}

impl PointLineGeometry {
    /// Builds the geometry by scanning all projective points and pairing
    /// perpendicular singular points into lines.
    pub fn polar(f: &Field, form: &dyn PolarForm) -> Result<PointLineGeometry> {
        let n = form.ambient();
        let g = form.gram(f);
        let points: Vec<Vector> = all_points(f, n)
            .into_iter()
            .filter(|x| form.is_singular(f, x))
            .collect();
        let point_index: HashMap<Vector, u32> =
            points.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
        let images: Vec<Vector> = points.iter().map(|x| vec_mat(f, x, &g)).collect();

        let mut lines: Vec<(Subspace, Vec<u32>)> = Vec::new();
        let mut covered = vec![u32::MAX; points.len()];
        for (i, x) in points.iter().enumerate() {
            covered[i] = i as u32;
            for (j, y) in points.iter().enumerate() {
                if covered[j] == i as u32 || !dot(f, &images[i], y).is_zero() {
                    continue;
                }
                let mut ids: Vec<u32> = vec![i as u32, j as u32];
                for c in f.nonzero() {
                    let v = normalize(f, &axpy(f, c, y, x)).expect("independent points");
                    ids.push(point_index[&v]);
                }
                for &id in &ids {
                    covered[id as usize] = i as u32;
                }
                if ids.iter().all(|&id| id >= i as u32) {
                    lines.push((Subspace::new(f, &[x.clone(), y.clone()])?, ids));
                }
            }
        }
        lines.sort_by(|a, b| a.0.cmp_canonical(f, &b.0));
        let incidence = IncidenceStructure::new(points.len(), lines.iter().map(|l| l.1.clone()).collect());
        Ok(PointLineGeometry {
            points,
            lines: lines.into_iter().map(|l| l.0).collect(),
            incidence,
            point_index,
        })
    }

    pub fn point_id(&self, f: &Field, v: &[Elem]) -> Option<u32> {
        let v = normalize(f, v)?;
        self.point_index.get(&v).copied()
    }
}

/// The elliptic quadric of `Q(x) = Tr_{q^3 -> q}(x^(q^3 + 1))` on GF(q^6),
/// viewed as GF(q)^6 through the basis `1, xi, ..., xi^5`. Its polar form is
/// `B(x, y) = Tr_{q^6 -> q}(x y^(q^3))`.
pub struct HermitianTraceQuadric {
    pub ext: Extension,
    pub form: QuadraticForm,
}

impl HermitianTraceQuadric {
    pub fn new(q: u32) -> Result<HermitianTraceQuadric> {
        let (p, e) = prime_power(q).ok_or_else(|| domain_err!("{q} is not a prime power"))?;
        let ext = Extension::new(Field::new(p, 6 * e)?, Field::new(p, e)?)?;
        let big = ext.big();
        let form = QuadraticForm::from_fn(ext.small(), 6, |x| {
            let v = ext.from_coords(x);
            let nv = big.pow(v, (q as u64).pow(3) + 1);
            let t = (0..3).fold(Elem::ZERO, |acc, i| big.add(acc, big.frobenius(nv, e * i)));
            big.restrict(ext.small(), t).expect("trace lands in GF(q)")
        });
        Ok(HermitianTraceQuadric { ext, form })
    }

    /// `Q(x)` computed directly in GF(q^6).
    pub fn eval_big(&self, x: Elem) -> Elem {
        let big = self.ext.big();
        let q = self.ext.small().order() as u64;
        let e = self.ext.small().degree();
        let nv = big.pow(x, q.pow(3) + 1);
        let t = (0..3).fold(Elem::ZERO, |acc, i| big.add(acc, big.frobenius(nv, e * i)));
        big.restrict(self.ext.small(), t).expect("trace lands in GF(q)")
    }

    /// `B(x, y) = Tr_{q^6 -> q}(x y^(q^3))` computed directly in GF(q^6).
    pub fn polar_big(&self, x: Elem, y: Elem) -> Elem {
        let big = self.ext.big();
        let q = self.ext.small().order() as u64;
        let v = big.mul(x, big.pow(y, q.pow(3)));
        let t = big.rel_trace(v, self.ext.small().degree()).expect("subfield");
        big.restrict(self.ext.small(), t).expect("trace lands in GF(q)")
    }

    pub fn geometry(&self) -> Result<PointLineGeometry> {
        PointLineGeometry::polar(self.ext.small(), &self.form)
    }
}

/// Finds `M` and `c != 0` with `q2(x M) = c q1(x)` for all `x`, by bringing
/// both forms to the shape `diag(1, ..., 1, d)` with `d` in {1, nonsquare}.
pub fn isometry_between(f: &Field, q1: &QuadraticForm, q2: &QuadraticForm) -> Result<(Matrix, Elem)> {
    let n = q1.dim();
    if q2.dim() != n {
        return Err(domain_err!("forms have different dimensions"));
    }
    let (b1, d1) = standard_basis(f, q1)?;
    let ns = f.least_nonsquare();
    for c in [Elem::ONE, ns] {
        let cinv = f.inv(c).expect("nonzero");
        let scaled = QuadraticForm::new(
            q2.coeffs().iter().map(|r| r.iter().map(|&x| f.mul(cinv, x)).collect()).collect(),
        );
        let (b2, d2) = standard_basis(f, &scaled)?;
        if d1 == d2 {
            let b1inv = inverse(f, &b1).expect("basis is invertible");
            return Ok((mat_mul(f, &b1inv, &b2), c));
        }
    }
    Err(Error::Domain("quadratic forms are not similar".into()))
}

/// Rows `b_i` with `Q(sum y_i b_i) = y_1^2 + ... + y_{n-1}^2 + d y_n^2`.
fn standard_basis(f: &Field, q: &QuadraticForm) -> Result<(Matrix, Elem)> {
    let n = q.dim();
    let g = q.polar_gram(f);
    if rank(f, &g) != n {
        return Err(domain_err!("quadratic form is degenerate"));
    }
    let mut basis: Matrix = Vec::new();
    let mut room = Subspace::whole(n);
    while room.dim() > 1 {
        // a vector with Q = 1 exists in any nondegenerate space of dim >= 2
        let v = span_vectors(f, &room)
            .find(|v| q.eval(f, v) == Elem::ONE)
            .ok_or_else(|| domain_err!("no unit vector found"))?;
        let vg = vec_mat(f, &v, &g);
        let orth = Subspace::span(f, &nullspace(f, &[vg], n))?;
        room = room.meet(f, &orth);
        basis.push(v);
    }
    let w = room.rows()[0].clone();
    let val = q.eval(f, &w);
    let target = if f.is_square(val) { Elem::ONE } else { f.least_nonsquare() };
    let ratio = f.div(target, val).ok_or_else(|| domain_err!("degenerate last vector"))?;
    let lam = f
        .elements()
        .find(|&l| f.mul(l, l) == ratio)
        .expect("ratio is a square");
    basis.push(scale(f, lam, &w));
    Ok((basis, target))
}

fn span_vectors<'a>(f: &'a Field, s: &'a Subspace) -> impl Iterator<Item = Vector> + 'a {
    let k = s.dim();
    let q = f.order() as u64;
    (1..q.pow(k as u32)).map(move |mut code| {
        let mut c = vec![Elem::ZERO; k];
        for slot in c.iter_mut() {
            *slot = Elem((code % q) as u32);
            code /= q;
        }
        vec_mat(f, &c, s.rows())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> Field {
        Field::from_order(q).unwrap()
    }

    fn m(f: &Field, rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| f.from_int(x)).collect()).collect()
    }

    #[test]
    fn canonicalize_examples() {
        let f = gf(3);
        let id = m(&f, &[&[1, 0], &[0, 1]]);
        assert_eq!(Subspace::new(&f, &id).unwrap().rows(), id.as_slice());
        let swapped = m(&f, &[&[0, 1], &[1, 0]]);
        assert_eq!(Subspace::new(&f, &swapped).unwrap().rows(), id.as_slice());
        let a = m(&f, &[&[1, 1, 0], &[0, 2, 0]]);
        assert_eq!(Subspace::new(&f, &a).unwrap().rows(), m(&f, &[&[1, 0, 0], &[0, 1, 0]]).as_slice());
        assert!(matches!(Subspace::new(&f, &m(&f, &[&[0, 0]])), Err(Error::Domain(_))));
    }

    #[test]
    fn perp_of_base_point() {
        let f = gf(5);
        let j = BilinearForm::standard_symplectic(&f, 6);
        let p = Subspace::point(&f, &m(&f, &[&[1, 0, 0, 0, 0, 0]])[0]).unwrap();
        let pp = perp(&f, &p, &j).unwrap();
        assert_eq!(pp.dim(), 5);
        for x in pp.points(&f) {
            assert!(x[5].is_zero());
        }
        assert_eq!(perp(&f, &pp, &j).unwrap(), p);
        assert_eq!(perp(&f, &Subspace::whole(6), &j).unwrap().dim(), 0);
        assert!(perp(&f, &Subspace::whole(4), &j).is_err());
    }

    #[test]
    fn symplectic_point_and_line_counts() {
        let f = gf(3);
        let j6 = BilinearForm::standard_symplectic(&f, 6);
        assert_eq!(isotropic_subspaces(&f, &j6, 1, None, None).unwrap().len(), 364);
        let j4 = BilinearForm::standard_symplectic(&f, 4);
        // (q+1)(q^2+1) lines of W(3, q)
        assert_eq!(isotropic_subspaces(&f, &j4, 2, None, None).unwrap().len(), 40);
        assert!(isotropic_subspaces(&f, &j4, 3, None, None).unwrap().is_empty());
    }

    #[test]
    fn w3q_counts_match_formulas() {
        for q in [3u32, 5, 7, 9, 11] {
            let f = gf(q);
            let j4 = BilinearForm::standard_symplectic(&f, 4);
            let geo = PointLineGeometry::polar(&f, &j4).unwrap();
            let q = q as usize;
            assert_eq!(geo.points.len(), (q + 1) * (q * q + 1));
            assert_eq!(geo.lines.len(), (q + 1) * (q * q + 1));
            for l in &geo.lines {
                assert!(is_totally_singular(&f, l, &j4));
            }
        }
    }

    #[test]
    fn w5q_counts() {
        let f = gf(3);
        let j6 = BilinearForm::standard_symplectic(&f, 6);
        let planes = isotropic_subspaces(&f, &j6, 3, None, None).unwrap();
        assert_eq!(planes.len(), 4 * 10 * 28);
        for w in planes.windows(2) {
            assert_eq!(w[0].cmp_canonical(&f, &w[1]), Ordering::Less);
        }
    }

    #[test]
    fn elliptic_quadric_q3() {
        let hq = HermitianTraceQuadric::new(3).unwrap();
        let geo = hq.geometry().unwrap();
        assert_eq!(geo.points.len(), 112);
        assert_eq!(geo.lines.len(), 280);
        assert_eq!(geo.incidence.verify_gq().order, Some((3, 9)));
        let f = hq.ext.small();
        assert_eq!(hq.form.eval(f, &[Elem::ZERO; 6]), Elem::ZERO);
        let big = hq.ext.big();
        for x in big.elements().step_by(13) {
            let c = hq.ext.to_coords(x);
            assert_eq!(hq.form.eval(f, &c), hq.eval_big(x));
            // B(x, x) = 2 Q(x)
            assert_eq!(hq.polar_big(x, x), f.add(hq.eval_big(x), hq.eval_big(x)));
        }
        // exhaustive singular-line enumeration agrees
        let lines = isotropic_subspaces(f, &hq.form, 2, None, None).unwrap();
        assert_eq!(lines, geo.lines);
    }

    #[test]
    fn elliptic_quadric_counts_q5() {
        let hq = HermitianTraceQuadric::new(5).unwrap();
        let geo = hq.geometry().unwrap();
        assert_eq!(geo.points.len(), 6 * 126);
        assert_eq!(geo.lines.len(), 26 * 126);
    }

    #[test]
    fn isometry_identity_and_scalar() {
        let f = gf(7);
        let q1 = QuadraticForm::diagonal(&[Elem::ONE, Elem::ONE]);
        let (mm, c) = isometry_between(&f, &q1, &q1).unwrap();
        assert_eq!(q1.transform(&f, &mm).coeffs().iter().flatten().filter(|x| !x.is_zero()).count(), 2);
        assert_eq!(c, Elem::ONE);
        let n = f.least_nonsquare();
        let q2 = QuadraticForm::diagonal(&[n, n]);
        let (mm, c) = isometry_between(&f, &q1, &q2).unwrap();
        for x in all_points(&f, 2) {
            assert_eq!(q2.eval(&f, &vec_mat(&f, &x, &mm)), f.mul(c, q1.eval(&f, &x)));
        }
    }

    #[test]
    fn isometry_rejects_inequivalent() {
        let f = gf(3);
        // hyperbolic versus elliptic plane
        let h = QuadraticForm::diagonal(&[Elem::ONE, f.from_int(-1)]);
        let e = QuadraticForm::diagonal(&[Elem::ONE, Elem::ONE]);
        assert!(isometry_between(&f, &h, &e).is_err());
    }

    #[test]
    fn meet_and_join() {
        let f = gf(5);
        let a = Subspace::new(&f, &m(&f, &[&[1, 0, 0, 0], &[0, 1, 0, 0]])).unwrap();
        let b = Subspace::new(&f, &m(&f, &[&[0, 1, 0, 0], &[0, 0, 1, 0]])).unwrap();
        assert_eq!(a.meet(&f, &b).rows(), m(&f, &[&[0, 1, 0, 0]]).as_slice());
        assert_eq!(a.join(&f, &b).dim(), 3);
        assert_eq!(a.meet_dim(&f, &b), 1);
    }

    #[test]
    fn parse_matrix_rows() {
        let f = gf(3);
        let mm = parse_matrix(&f, "0 1 0 1 0 0; 0 0 1 1 1 0").unwrap();
        assert_eq!(mm, m(&f, &[&[0, 1, 0, 1, 0, 0], &[0, 0, 1, 1, 1, 0]]));
        let f9 = gf(9);
        assert_eq!(parse_matrix(&f9, "z^3 -1").unwrap()[0], vec![f9.exp(3), f9.from_int(2)]);
        assert!(parse_matrix(&f, "a b").is_err());
    }
}
