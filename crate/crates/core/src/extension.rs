//! A field viewed as a vector space over one of its subfields.

use crate::error::{config_err, Result};
use crate::field::{Elem, Field};

/// `big` as a `degree`-dimensional space over `small`, in the basis
/// `1, x, ..., x^(degree-1)` where `x` is the primitive element of `big`.
pub struct Extension {
    big: Field,
    small: Field,
    degree: usize,
    basis: Vec<Elem>,
    coords: Vec<u8>,
}

impl Extension {
    pub fn new(big: Field, small: Field) -> Result<Extension> {
        if big.characteristic() != small.characteristic() || !big.degree().is_multiple_of(small.degree()) {
            return Err(config_err!("{small:?} is not a subfield of {big:?}"));
        }
        if small.order() > 256 {
            return Err(config_err!("subfield {small:?} too large for coordinate tables"));
        }
        let degree = (big.degree() / small.degree()) as usize;
        let xi = big.primitive();
        let basis: Vec<Elem> = (0..degree).map(|i| big.pow(xi, i as u64)).collect();
        let embedded: Vec<Elem> = small
            .elements()
            .map(|c| big.embed(&small, c))
            .collect::<Result<_>>()?;

        let q = small.order() as usize;
        let mut coords = vec![0u8; big.order() as usize * degree];
        let mut tuple = vec![0usize; degree];
        for _ in 0..big.order() {
            let mut v = Elem::ZERO;
            for (i, &c) in tuple.iter().enumerate() {
                v = big.add(v, big.mul(embedded[c], basis[i]));
            }
            let base = v.0 as usize * degree;
            for (i, &c) in tuple.iter().enumerate() {
                coords[base + i] = c as u8;
            }
            // odometer
            for t in tuple.iter_mut() {
                *t += 1;
                if *t < q {
                    break;
                }
                *t = 0;
            }
        }
        Ok(Extension { big, small, degree, basis, coords })
    }

    pub fn big(&self) -> &Field {
        &self.big
    }

    pub fn small(&self) -> &Field {
        &self.small
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn to_coords(&self, x: Elem) -> Vec<Elem> {
        let base = x.0 as usize * self.degree;
        self.coords[base..base + self.degree]
            .iter()
            .map(|&c| Elem(c as u32))
            .collect()
    }

    pub fn from_coords(&self, c: &[Elem]) -> Elem {
        c.iter().zip(&self.basis).fold(Elem::ZERO, |acc, (&ci, &b)| {
            let e = self.big.embed(&self.small, ci).expect("subfield checked at construction");
            self.big.add(acc, self.big.mul(e, b))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_roundtrip() {
        for (p, s, b) in [(3, 1, 2), (3, 2, 4), (5, 1, 2), (3, 1, 6)] {
            let ext = Extension::new(Field::new(p, b).unwrap(), Field::new(p, s).unwrap()).unwrap();
            for x in ext.big().elements() {
                let c = ext.to_coords(x);
                assert_eq!(ext.from_coords(&c), x);
            }
        }
    }

    #[test]
    fn coordinates_are_linear() {
        let ext = Extension::new(Field::new(3, 4).unwrap(), Field::new(3, 2).unwrap()).unwrap();
        let (big, small) = (ext.big(), ext.small());
        for x in big.elements().step_by(5) {
            for y in big.elements().step_by(7) {
                let cx = ext.to_coords(x);
                let cy = ext.to_coords(y);
                let sum: Vec<Elem> = cx.iter().zip(&cy).map(|(&a, &b)| small.add(a, b)).collect();
                assert_eq!(ext.to_coords(big.add(x, y)), sum);
            }
        }
    }
}
