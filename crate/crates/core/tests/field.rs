use flockgq::field::{conway_polynomial, prime_power, Elem, Field};
use proptest::prelude::*;

// Polynomials over Z/p, constant term first.
fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x * y) % p;
        }
    }
    let n = m.len() - 1;
    for k in (n..r.len()).rev() {
        let c = r[k];
        if c != 0 {
            for i in 0..=n {
                r[k - n + i] = (r[k - n + i] + (p - c) * m[i]) % p;
            }
        }
    }
    r.truncate(n);
    trim(r)
}

fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// First monic degree-n polynomial in Conway order whose root x is
/// primitive and whose norms to every proper subfield are roots of the
/// smaller Conway polynomials found the same way.
fn conway_oracle(p: u64, n: u32, smaller: &dyn Fn(u32) -> Vec<u64>) -> Vec<u64> {
    let order = p.pow(n) - 1;
    let factors = prime_factors(order);
    let divisors: Vec<u32> = (1..n).filter(|d| n.is_multiple_of(*d)).collect();
    let total = p.pow(n);
    for idx in 0..total {
        // digits a_{n-1}, ..., a_0 with a_{n-1} most significant
        let mut a = vec![0u64; n as usize];
        let mut t = idx;
        for i in 0..n as usize {
            a[i] = t % p;
            t /= p;
        }
        let mut m = vec![0u64; n as usize + 1];
        m[n as usize] = 1;
        for i in 0..n as usize {
            let sign_neg = (n as usize - i) % 2 == 1;
            m[i] = if sign_neg { (p - a[i]) % p } else { a[i] };
        }
        if m[0] == 0 {
            continue;
        }
        let x = vec![0u64, 1];
        if powmod(&x, order, &m, p) != vec![1] {
            continue;
        }
        if factors.iter().any(|&r| powmod(&x, order / r, &m, p) == vec![1]) {
            continue;
        }
        let compatible = divisors.iter().all(|&d| {
            let c = smaller(d);
            let y = powmod(&x, order / (p.pow(d) - 1), &m, p);
            let mut acc = vec![0u64];
            let mut pw = vec![1u64];
            for &ci in &c {
                let term: Vec<u64> = pw.iter().map(|&v| v * ci % p).collect();
                let len = acc.len().max(term.len());
                acc = trim((0..len).map(|i| (acc.get(i).unwrap_or(&0) + term.get(i).unwrap_or(&0)) % p).collect());
                pw = mulmod(&pw, &y, &m, p);
            }
            acc == vec![0]
        });
        if compatible {
            return m;
        }
    }
    panic!("no Conway polynomial found for ({p},{n})");
}

fn oracle(p: u64, n: u32) -> Vec<u64> {
    conway_oracle(p, n, &|d| oracle(p, d))
}

#[test]
fn bundled_conway_polynomials_match_oracle() {
    let cases = [(3, 1), (3, 2), (3, 3), (3, 4), (3, 6), (3, 12), (5, 1), (5, 2), (5, 3), (5, 6), (7, 1), (7, 2), (7, 3), (7, 6), (11, 1), (11, 2), (11, 3)];
    for (p, n) in cases {
        let bundled: Vec<u64> = conway_polynomial(p, n).unwrap().iter().map(|&c| c as u64).collect();
        assert_eq!(oracle(p as u64, n), bundled, "({p},{n})");
    }
}

#[test]
fn field_modulus_is_bundled_polynomial() {
    for q in [3u32, 9, 27, 81, 729, 5, 25, 125, 7, 49, 343, 11, 121] {
        let f = Field::from_order(q).unwrap();
        let (p, e) = prime_power(q).unwrap();
        assert_eq!(f.modulus(), conway_polynomial(p, e).unwrap());
    }
}

fn field_strategy() -> impl Strategy<Value = Field> {
    static FIELDS: std::sync::OnceLock<Vec<Field>> = std::sync::OnceLock::new();
    let fields = FIELDS.get_or_init(|| {
        [3u32, 5, 7, 9, 11, 25, 27, 49, 81, 121, 125, 729].iter().map(|&q| Field::from_order(q).unwrap()).collect()
    });
    prop::sample::select(fields.clone())
}

fn elem(f: &Field, seed: u32) -> Elem {
    f.from_gap_rank(seed % f.order())
}

proptest! {
    #[test]
    fn gap_rank_roundtrips(f in field_strategy(), s in any::<u32>()) {
        let x = elem(&f, s);
        prop_assert_eq!(f.from_gap_rank(f.gap_rank(x)), x);
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative(f in field_strategy(), a in any::<u32>(), b in any::<u32>(), k in 0u32..6) {
        let (x, y) = (elem(&f, a), elem(&f, b));
        prop_assert_eq!(f.frobenius(f.add(x, y), k), f.add(f.frobenius(x, k), f.frobenius(y, k)));
        prop_assert_eq!(f.frobenius(f.mul(x, y), k), f.mul(f.frobenius(x, k), f.frobenius(y, k)));
    }

    #[test]
    fn roots_of_a_product_are_the_factors(f in field_strategy(), rs in prop::collection::vec(any::<u32>(), 1..5)) {
        let mut roots: Vec<Elem> = rs.iter().map(|&r| elem(&f, r)).collect();
        let poly = f.poly_from_roots(&roots);
        roots.sort_unstable();
        roots.dedup();
        let mut got = f.poly_roots(&poly).unwrap();
        got.sort_unstable();
        prop_assert_eq!(got, roots);
    }

    #[test]
    fn relative_trace_is_linear(a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        static F: std::sync::OnceLock<Field> = std::sync::OnceLock::new();
        let f = F.get_or_init(|| Field::from_order(729).unwrap());
        let (x, y) = (elem(f, a), elem(f, b));
        for d in [1u32, 2, 3] {
            let sub = 3u64.pow(d) - 1;
            let s = f.exp((c as u64 % sub) * (728 / sub));
            let lhs = f.rel_trace(f.add(f.mul(s, x), y), d).unwrap();
            let rhs = f.add(f.mul(s, f.rel_trace(x, d).unwrap()), f.rel_trace(y, d).unwrap());
            prop_assert_eq!(lhs, rhs);
            prop_assert!(f.in_subfield(lhs, d));
        }
    }

    #[test]
    fn log_exp_and_inverse(f in field_strategy(), a in any::<u32>()) {
        let x = elem(&f, a);
        if !x.is_zero() {
            prop_assert_eq!(f.exp(f.log(x).unwrap() as u64), x);
            prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), Elem::ONE);
        }
    }
}
