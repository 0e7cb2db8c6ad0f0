//! Finite fields GF(p^f) for odd p, up to 9^6 = 3^12 elements.
//!
//! Elements are stored by their polynomial-basis encoding: the coefficient
//! vector `(c_0, ..., c_{f-1})` of `c_0 + c_1 x + ... + c_{f-1} x^{f-1}`
//! packed as the base-`p` integer `c_0 + c_1 p + ...`. Prime-field elements
//! therefore encode as their integer value. The modulus is the Conway
//! polynomial for `(p, f)`, so the generator `x` is the same primitive element
//! that GAP calls `Z(p^f)`, and subfield generators are the matching powers.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{config_err, domain_err, Result};

/// Upper bound on the field order supported by [`Field::new`].
pub const MAX_ORDER: u32 = 531_441;

/// Conway polynomials, coefficients from the constant term upwards (monic).
const CONWAY: &[(u32, u32, &[u32])] = &[
    (3, 1, &[1, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (3, 6, &[2, 2, 1, 0, 2, 0, 1]),
    (3, 12, &[2, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 0, 1]),
    (5, 1, &[3, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (5, 6, &[2, 0, 1, 4, 1, 0, 1]),
    (7, 1, &[4, 1]),
    (7, 2, &[3, 6, 1]),
    (7, 3, &[4, 0, 6, 1]),
    (7, 6, &[3, 6, 4, 5, 1, 0, 1]),
    (11, 1, &[9, 1]),
    (11, 2, &[2, 7, 1]),
    (11, 3, &[9, 2, 0, 1]),
];

/// Returns the bundled Conway polynomial for `(p, f)`, if any.
pub fn conway_polynomial(p: u32, f: u32) -> Option<&'static [u32]> {
    CONWAY
        .iter()
        .find(|(cp, cf, _)| *cp == p && *cf == f)
        .map(|(_, _, c)| *c)
}

/// A field element, stored by its polynomial-basis encoding.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

const NO_LOG: u32 = u32::MAX;
// fields at most this large get full addition and multiplication tables
const TABLE_LIMIT: u32 = 1024;

#[derive(Clone)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
}

#[derive(Clone)]
pub struct Field {
    p: u32,
    degree: u32,
    order: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    rank: Vec<u32>,
    by_rank: Vec<u32>,
    tables: Option<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.degree)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.degree == other.degree
    }
}
impl Eq for Field {}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl Field {
    /// Builds GF(p^f) from the bundled Conway polynomial, checking by brute
    /// force that the polynomial root has multiplicative order `p^f - 1`
    /// (which also certifies irreducibility).
    pub fn new(p: u32, f: u32) -> Result<Field> {
        if p == 2 || !is_prime(p) {
            return Err(config_err!("characteristic {p} is not an odd prime"));
        }
        if f == 0 {
            return Err(config_err!("extension degree must be positive"));
        }
        let order = p
            .checked_pow(f)
            .filter(|&o| o <= MAX_ORDER)
            .ok_or_else(|| config_err!("GF({p}^{f}) exceeds the supported size"))?;
        let modulus = conway_polynomial(p, f)
            .ok_or_else(|| config_err!("no Conway polynomial bundled for GF({p}^{f})"))?
            .to_vec();

        let n = f as usize;
        let mut exp = Vec::with_capacity(order as usize - 1);
        let mut log = vec![NO_LOG; order as usize];
        let mut cur = vec![0u32; n];
        cur[0] = 1;
        for k in 0..order - 1 {
            let code = encode(&cur, p);
            if log[code as usize] != NO_LOG {
                return Err(config_err!(
                    "modulus for GF({p}^{f}) is not primitive (x^{k} repeats)"
                ));
            }
            log[code as usize] = k;
            exp.push(code);
            // multiply by the root x
            if n == 1 {
                let root = (p - modulus[0]) % p;
                cur[0] = cur[0] * root % p;
            } else {
                let lead = cur[n - 1];
                for i in (1..n).rev() {
                    cur[i] = cur[i - 1];
                }
                cur[0] = 0;
                for i in 0..n {
                    cur[i] = (cur[i] + (p - lead) * modulus[i]) % p;
                }
            }
        }
        if encode(&cur, p) != 1 {
            return Err(config_err!("modulus for GF({p}^{f}) is not primitive"));
        }

        let mut field = Field {
            p,
            degree: f,
            order,
            modulus,
            exp,
            log,
            rank: Vec::new(),
            by_rank: Vec::new(),
            tables: None,
        };
        field.build_rank();
        if order <= TABLE_LIMIT {
            let q = order as usize;
            let mut add = vec![0u32; q * q];
            let mut mul = vec![0u32; q * q];
            for a in 0..order {
                for b in 0..order {
                    add[a as usize * q + b as usize] = field.add_slow(a, b);
                    mul[a as usize * q + b as usize] = field.mul_slow(a, b);
                }
            }
            field.tables = Some(Tables { add, mul });
        }
        Ok(field)
    }

    /// Builds GF(q) for a prime power `q`.
    pub fn from_order(q: u32) -> Result<Field> {
        let (p, f) = prime_power(q).ok_or_else(|| config_err!("{q} is not a prime power"))?;
        Field::new(p, f)
    }

    fn build_rank(&mut self) {
        // 0 first; then by smallest containing subfield, then by exponent.
        let mut keys: Vec<(u32, u32, u32)> = Vec::with_capacity(self.order as usize);
        for code in 1..self.order {
            let d = self.min_subfield_degree(Elem(code));
            let sub_order = self.p.pow(d);
            let step = (self.order - 1) / (sub_order - 1);
            keys.push((sub_order, self.log[code as usize] / step, code));
        }
        keys.sort_unstable();
        self.rank = vec![0; self.order as usize];
        self.by_rank = Vec::with_capacity(self.order as usize);
        self.by_rank.push(0);
        for (i, &(_, _, code)) in keys.iter().enumerate() {
            self.rank[code as usize] = i as u32 + 1;
            self.by_rank.push(code);
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Conway modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Short name used in the JSON wire form, e.g. `"3^2"`.
    pub fn name(&self) -> String {
        format!("{}^{}", self.p, self.degree)
    }

    pub fn primitive(&self) -> Elem {
        Elem(self.exp[1 % self.exp.len()])
    }

    /// Every element in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(Elem)
    }

    /// Every element in GAP order (see [`Field::gap_rank`]).
    pub fn elements_gap_order(&self) -> impl Iterator<Item = Elem> + '_ {
        self.by_rank.iter().map(|&c| Elem(c))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> {
        (1..self.order).map(Elem)
    }

    /// The integer `v` reduced into the prime subfield.
    pub fn from_int(&self, v: i64) -> Elem {
        Elem(v.rem_euclid(self.p as i64) as u32)
    }

    /// Coefficient vector of `x` in the polynomial basis.
    pub fn coefficients(&self, x: Elem) -> Vec<u32> {
        let mut c = Vec::with_capacity(self.degree as usize);
        let mut v = x.0;
        for _ in 0..self.degree {
            c.push(v % self.p);
            v /= self.p;
        }
        c
    }

    pub fn from_coefficients(&self, c: &[u32]) -> Elem {
        Elem(encode(c, self.p))
    }

    fn add_slow(&self, mut a: u32, mut b: u32) -> u32 {
        let (p, mut r, mut pw) = (self.p, 0, 1);
        for _ in 0..self.degree {
            r += ((a % p + b % p) % p) * pw;
            pw *= p;
            a /= p;
            b /= p;
        }
        r
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp[(s % (self.order as u64 - 1)) as usize]
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => Elem(t.add[(a.0 * self.order + b.0) as usize]),
            None => Elem(self.add_slow(a.0, b.0)),
        }
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => Elem(t.mul[(a.0 * self.order + b.0) as usize]),
            None => Elem(self.mul_slow(a.0, b.0)),
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let (p, mut v, mut r, mut pw) = (self.p, a.0, 0, 1);
        for _ in 0..self.degree {
            r += ((p - v % p) % p) * pw;
            pw *= p;
            v /= p;
        }
        Elem(r)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        let l = self.log(a)?;
        let m = self.order - 1;
        Some(Elem(self.exp[((m - l) % m) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// `a^e` for a non-negative exponent; `0^0 = 1`.
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        match self.log(a) {
            None => Elem::ZERO,
            Some(l) => {
                let m = self.order as u64 - 1;
                Elem(self.exp[((l as u64 % m) * (e % m) % m) as usize])
            }
        }
    }

    /// `a^(p^k)`.
    pub fn frobenius(&self, a: Elem, k: u32) -> Elem {
        let k = k % self.degree;
        self.pow(a, (self.p as u64).pow(k))
    }

    /// Discrete logarithm base [`Field::primitive`]; `None` for zero.
    pub fn log(&self, a: Elem) -> Option<u32> {
        match self.log[a.0 as usize] {
            NO_LOG => None,
            l => Some(l),
        }
    }

    /// `primitive^k`.
    pub fn exp(&self, k: u64) -> Elem {
        Elem(self.exp[(k % (self.order as u64 - 1)) as usize])
    }

    pub fn is_square(&self, a: Elem) -> bool {
        self.log(a).is_none_or(|l| l % 2 == 0)
    }

    /// Smallest `d` dividing the degree with `a` in GF(p^d).
    pub fn min_subfield_degree(&self, a: Elem) -> u32 {
        (1..=self.degree)
            .filter(|d| self.degree.is_multiple_of(*d))
            .find(|&d| self.frobenius(a, d) == a)
            .unwrap_or(self.degree)
    }

    pub fn in_subfield(&self, a: Elem, d: u32) -> bool {
        self.degree.is_multiple_of(d) && self.frobenius(a, d) == a
    }

    /// Position of `a` in GAP's element order: zero first, then elements
    /// graded by the smallest subfield containing them (smaller subfields
    /// first), and within a grade by exponent of the primitive element.
    ///
    /// With Conway moduli, `Z(p^d) = Z(p^f)^((p^f-1)/(p^d-1))`, so ordering a
    /// grade by the subfield's own exponent and by the ambient exponent agree.
    pub fn gap_rank(&self, a: Elem) -> u32 {
        self.rank[a.0 as usize]
    }

    pub fn from_gap_rank(&self, r: u32) -> Elem {
        Elem(self.by_rank[r as usize])
    }

    /// Maps an element of the subfield `sub` into this field.
    pub fn embed(&self, sub: &Field, x: Elem) -> Result<Elem> {
        if sub.p != self.p || !self.degree.is_multiple_of(sub.degree) {
            return Err(domain_err!("{sub:?} is not a subfield of {self:?}"));
        }
        Ok(match sub.log(x) {
            None => Elem::ZERO,
            Some(l) => {
                let step = (self.order as u64 - 1) / (sub.order as u64 - 1);
                self.exp(l as u64 * step)
            }
        })
    }

    /// Inverse of [`Field::embed`]; fails if `x` is outside the subfield.
    pub fn restrict(&self, sub: &Field, x: Elem) -> Result<Elem> {
        if sub.p != self.p || !self.degree.is_multiple_of(sub.degree) {
            return Err(domain_err!("{sub:?} is not a subfield of {self:?}"));
        }
        match self.log(x) {
            None => Ok(Elem::ZERO),
            Some(l) => {
                let step = (self.order - 1) / (sub.order - 1);
                if l % step != 0 {
                    return Err(domain_err!("element is not in {sub:?}"));
                }
                Ok(sub.exp((l / step) as u64))
            }
        }
    }

    /// Relative trace onto GF(p^d): `x + x^(p^d) + x^(p^2d) + ...`.
    pub fn rel_trace(&self, x: Elem, d: u32) -> Result<Elem> {
        if d == 0 || !self.degree.is_multiple_of(d) {
            return Err(domain_err!("GF({}^{d}) is not a subfield of {self:?}", self.p));
        }
        let mut acc = Elem::ZERO;
        for i in 0..self.degree / d {
            acc = self.add(acc, self.frobenius(x, i * d));
        }
        Ok(acc)
    }

    /// Relative norm onto GF(p^d): `x^((p^f-1)/(p^d-1))`.
    pub fn rel_norm(&self, x: Elem, d: u32) -> Result<Elem> {
        if d == 0 || !self.degree.is_multiple_of(d) {
            return Err(domain_err!("GF({}^{d}) is not a subfield of {self:?}", self.p));
        }
        let e = (self.order as u64 - 1) / (self.p as u64).pow(d).saturating_sub(1).max(1);
        Ok(self.pow(x, e))
    }

    /// The nonsquare of least GAP rank.
    pub fn least_nonsquare(&self) -> Elem {
        self.elements_gap_order()
            .find(|&x| !self.is_square(x))
            .expect("odd-order fields have nonsquares")
    }

    /// Evaluates a polynomial given by coefficients from the constant term up.
    pub fn poly_eval(&self, coeffs: &[Elem], x: Elem) -> Elem {
        coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// All roots in this field, by exhaustive evaluation.
    pub fn poly_roots(&self, coeffs: &[Elem]) -> Result<Vec<Elem>> {
        let deg = coeffs.iter().rposition(|c| !c.is_zero());
        if deg.is_none_or(|d| d == 0) {
            return Err(domain_err!("polynomial must have degree at least 1"));
        }
        Ok(self
            .elements()
            .filter(|&x| self.poly_eval(coeffs, x).is_zero())
            .collect())
    }

    /// Coefficients of `prod (X - r)` over the given roots, constant term first.
    pub fn poly_from_roots(&self, roots: &[Elem]) -> Vec<Elem> {
        let mut poly = vec![Elem::ONE];
        for &r in roots {
            let mut next = vec![Elem::ZERO; poly.len() + 1];
            for (i, &c) in poly.iter().enumerate() {
                next[i + 1] = self.add(next[i + 1], c);
                next[i] = self.sub(next[i], self.mul(c, r));
            }
            poly = next;
        }
        poly
    }

    /// Canonical JSON wire form of an element.
    pub fn to_wire(&self, x: Elem) -> WireElem {
        WireElem {
            field: self.name(),
            log: match self.log(x) {
                None => WireLog::Zero(ZeroTag::Zero),
                Some(l) => WireLog::Log(l),
            },
        }
    }

    pub fn from_wire(&self, w: &WireElem) -> Result<Elem> {
        if w.field != self.name() {
            return Err(domain_err!("element of GF({}) given where GF({}) expected", w.field, self.name()));
        }
        Ok(match w.log {
            WireLog::Zero(_) => Elem::ZERO,
            WireLog::Log(l) if l < self.order - 1 => self.exp(l as u64),
            WireLog::Log(l) => return Err(domain_err!("log {l} out of range for GF({})", self.name())),
        })
    }

    /// Human-readable rendering: integers for prime-field elements, `z^k`
    /// otherwise.
    pub fn display(&self, x: Elem) -> String {
        if x.0 < self.p {
            x.0.to_string()
        } else {
            format!("z^{}", self.log(x).unwrap_or(0))
        }
    }
}

fn encode(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// `(p, f)` with `q = p^f`, for prime powers `q`.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut v, mut f) = (q, 0);
    while v % p == 0 {
        v /= p;
        f += 1;
    }
    (v == 1).then_some((p, f))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroTag {
    Zero,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WireLog {
    Log(u32),
    Zero(ZeroTag),
}

/// `{"field":"3^2","log":k}` with `"log":"zero"` for the zero element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireElem {
    pub field: String,
    pub log: WireLog,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn least_primitive_root(p: u32) -> u32 {
        (2..p)
            .find(|&g| {
                let mut x = 1u64;
                (1..p).all(|k| {
                    x = x * g as u64 % p as u64;
                    x != 1 || k == p - 1
                })
            })
            .unwrap()
    }

    #[test]
    fn prime_fields_use_least_primitive_root() {
        for p in [3, 5, 7, 11] {
            let f = Field::new(p, 1).unwrap();
            assert_eq!(f.primitive().0, least_primitive_root(p), "p = {p}");
        }
        assert_eq!(Field::new(3, 1).unwrap().primitive(), Elem(2));
        assert_eq!(Field::new(11, 1).unwrap().primitive(), Elem(2));
    }

    #[test]
    fn gf9_modulus() {
        let f = Field::new(3, 2).unwrap();
        assert_eq!(f.modulus(), &[2, 2, 1]);
        // x^2 + 2x + 2 has no roots in GF(3) and its root has order 8
        for a in 0..3u32 {
            assert_ne!((a * a + 2 * a + 2) % 3, 0);
        }
        let z = f.primitive();
        assert!((1..8).all(|k| f.pow(z, k) != Elem::ONE));
        assert_eq!(f.pow(z, 8), Elem::ONE);
    }

    #[test]
    fn unsupported_fields_are_config_errors() {
        assert!(matches!(Field::new(2, 3), Err(crate::Error::Config(_))));
        assert!(matches!(Field::new(13, 1), Err(crate::Error::Config(_))));
        assert!(matches!(Field::new(3, 13), Err(crate::Error::Config(_))));
        assert!(matches!(Field::new(9, 1), Err(crate::Error::Config(_))));
    }

    #[test]
    fn gap_rank_small_cases() {
        let f = Field::new(3, 1).unwrap();
        assert_eq!(f.gap_rank(Elem(0)), 0);
        assert_eq!(f.gap_rank(Elem(1)), 1);
        assert_eq!(f.gap_rank(Elem(2)), 2);
        // GF(9): 0, 1, 2, then z, z^2, z^3, z^5, z^6, z^7
        let f = Field::new(3, 2).unwrap();
        let order: Vec<_> = f.elements_gap_order().collect();
        let z = |k| f.exp(k);
        assert_eq!(
            order,
            vec![Elem(0), Elem(1), Elem(2), z(1), z(2), z(3), z(5), z(6), z(7)]
        );
    }

    #[test]
    fn gap_rank_is_a_bijection() {
        for (p, d) in [(3, 2), (3, 4), (5, 2), (7, 2), (11, 2), (3, 6)] {
            let f = Field::new(p, d).unwrap();
            let mut seen = vec![false; f.order() as usize];
            for x in f.elements() {
                let r = f.gap_rank(x) as usize;
                assert!(!seen[r]);
                seen[r] = true;
                assert_eq!(f.from_gap_rank(r as u32), x);
            }
        }
    }

    #[test]
    fn frobenius_is_additive_exhaustively() {
        for q in [3, 5, 7, 9, 11, 25, 27, 49, 81, 121] {
            let f = Field::from_order(q).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    let lhs = f.pow(f.add(a, b), f.characteristic() as u64);
                    let rhs = f.add(
                        f.pow(a, f.characteristic() as u64),
                        f.pow(b, f.characteristic() as u64),
                    );
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn field_axioms_sampled() {
        let f = Field::new(3, 6).unwrap();
        for a in f.elements().step_by(7) {
            assert_eq!(f.pow(a, f.order() as u64), a);
            assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
            if let Some(ai) = f.inv(a) {
                assert_eq!(f.mul(a, ai), Elem::ONE);
            }
            for b in f.elements().step_by(53) {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.add(a, b), f.add(b, a));
            }
        }
    }

    #[test]
    fn conway_subfield_compatibility() {
        // the restriction of the big primitive element is the small one
        for (p, small, big) in [(3, 1, 2), (3, 2, 6), (3, 2, 12), (3, 4, 12), (3, 3, 6), (5, 2, 6), (7, 3, 6), (11, 1, 2)] {
            let fs = Field::new(p, small).unwrap();
            let fb = Field::new(p, big).unwrap();
            let img = fb.embed(&fs, fs.primitive()).unwrap();
            assert!(fb.in_subfield(img, small));
            // the minimal polynomial of the image is the small Conway polynomial
            let coeffs: Vec<Elem> = fs
                .modulus()
                .iter()
                .map(|&c| fb.from_int(c as i64))
                .collect();
            assert!(fb.poly_eval(&coeffs, img).is_zero(), "GF({p}^{small}) in GF({p}^{big})");
            // embedding is a ring homomorphism
            for a in fs.elements() {
                for b in fs.elements().take(20) {
                    let s = fb.embed(&fs, fs.add(a, b)).unwrap();
                    let t = fb.add(fb.embed(&fs, a).unwrap(), fb.embed(&fs, b).unwrap());
                    assert_eq!(s, t);
                    assert_eq!(fb.restrict(&fs, s).unwrap(), fs.add(a, b));
                }
            }
        }
    }

    #[test]
    fn poly_roots_examples() {
        let f9 = Field::new(3, 2).unwrap();
        assert_eq!(f9.poly_roots(&[f9.from_int(-1), Elem::ONE]).unwrap(), vec![Elem::ONE]);
        let f3 = Field::new(3, 1).unwrap();
        assert!(f3.poly_roots(&[Elem::ONE, Elem::ZERO, Elem::ONE]).unwrap().is_empty());
        // X^4 + X + 1 over GF(3^6) has q + 1 = 4 roots
        let f = Field::new(3, 6).unwrap();
        let mut c = vec![Elem::ZERO; 5];
        c[0] = Elem::ONE;
        c[1] = Elem::ONE;
        c[4] = Elem::ONE;
        assert_eq!(f.poly_roots(&c).unwrap().len(), 4);
        assert!(f.poly_roots(&[Elem::ONE]).is_err());
    }

    #[test]
    fn trace_examples() {
        let f = Field::new(3, 6).unwrap();
        assert_eq!(f.rel_trace(Elem::ZERO, 1).unwrap(), Elem::ZERO);
        assert_eq!(f.rel_trace(Elem::ONE, 1).unwrap(), Elem::ZERO);
        for x in f.elements().step_by(11) {
            let t = f.rel_trace(x, 1).unwrap();
            assert_eq!(t, f.rel_trace(f.frobenius(x, 1), 1).unwrap());
            assert!(f.in_subfield(t, 1));
        }
        assert!(f.rel_trace(Elem::ONE, 4).is_err());
        assert!(f.rel_norm(Elem::ONE, 5).is_err());
    }

    #[test]
    fn trace_is_linear_and_onto_for_q3() {
        let f = Field::new(3, 6).unwrap();
        let mut hits = [0usize; 3];
        for x in f.elements() {
            let t = f.rel_trace(x, 1).unwrap();
            hits[t.0 as usize] += 1;
            for c in [Elem(1), Elem(2)] {
                assert_eq!(f.rel_trace(f.mul(c, x), 1).unwrap(), f.mul(c, t));
            }
        }
        assert_eq!(hits, [243, 243, 243]);
    }

    #[test]
    fn norm_lands_in_subfield() {
        let f = Field::new(5, 6).unwrap();
        for x in f.nonzero().step_by(97) {
            assert!(f.in_subfield(f.rel_norm(x, 3).unwrap(), 3));
            assert!(f.in_subfield(f.rel_norm(x, 2).unwrap(), 2));
        }
    }

    #[test]
    fn wire_roundtrip() {
        let f = Field::new(3, 2).unwrap();
        for x in f.elements() {
            let w = f.to_wire(x);
            let s = serde_json::to_string(&w).unwrap();
            let back: WireElem = serde_json::from_str(&s).unwrap();
            assert_eq!(f.from_wire(&back).unwrap(), x);
        }
        let zero = serde_json::to_string(&f.to_wire(Elem::ZERO)).unwrap();
        assert_eq!(zero, r#"{"field":"3^2","log":"zero"}"#);
        let bad = WireElem { field: "5^1".into(), log: WireLog::Log(0) };
        assert!(f.from_wire(&bad).is_err());
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(11), Some((11, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
