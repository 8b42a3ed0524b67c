//! GF(2^m) arithmetic for deriving BCH generator polynomials.
//!
//! Fields are represented with log/antilog tables over a fixed table of
//! primitive polynomials, one per extension degree:
//!
//! | m | polynomial |
//! |---|------------|
//! | 2 | x^2+x+1 |
//! | 3 | x^3+x+1 |
//! | 4 | x^4+x+1 |
//! | 5 | x^5+x^2+1 |
//! | 6 | x^6+x+1 |
//! | 7 | x^7+x^3+1 |
//! | 8 | x^8+x^4+x^3+x^2+1 |
//! | 9 | x^9+x^4+1 |
//! | 10 | x^10+x^3+1 |
//!
//! Binary polynomials elsewhere in this module are `u128` bit masks with the
//! constant term at bit 0, so x^3+x+1 is `0b1011`.

use crate::{Error, Result};

/// Primitive polynomials indexed by extension degree, bit mask form.
const PRIMITIVE_POLYS: [(u32, u32); 9] = [
    (2, 0b111),
    (3, 0b1011),
    (4, 0b10011),
    (5, 0b100101),
    (6, 0b1000011),
    (7, 0b10001001),
    (8, 0b100011101),
    (9, 0b1000010001),
    (10, 0b10000001001),
];

/// The primitive polynomial this crate uses for GF(2^m), if tabulated.
pub fn primitive_polynomial(m: u32) -> Option<u32> {
    PRIMITIVE_POLYS
        .iter()
        .find(|&&(deg, _)| deg == m)
        .map(|&(_, p)| p)
}

/// GF(2^m) with exp/log tables over the tabulated primitive polynomial.
#[derive(Debug, Clone)]
pub struct Gf2m {
    m: u32,
    /// exp[i] = alpha^i for i in 0..2^m-1.
    exp: Vec<u32>,
    /// log[x] defined for x in 1..2^m.
    log: Vec<u32>,
}

impl Gf2m {
    pub fn new(m: u32) -> Result<Self> {
        let poly = primitive_polynomial(m).ok_or_else(|| {
            Error::InvalidDimensions(format!("no primitive polynomial tabulated for m = {m}"))
        })?;
        let order = (1u32 << m) - 1;
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; 1 << m];
        let mut x = 1u32;
        for i in 0..order {
            exp[i as usize] = x;
            log[x as usize] = i;
            x <<= 1;
            if x >> m != 0 {
                x ^= poly;
            }
        }
        debug_assert_eq!(x, 1, "polynomial is not primitive");
        Ok(Self { m, exp, log })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Multiplicative order of the field, 2^m - 1.
    pub fn order(&self) -> u32 {
        (1 << self.m) - 1
    }

    pub fn alpha_pow(&self, e: u64) -> u32 {
        self.exp[(e % u64::from(self.order())) as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = u64::from(self.log[a as usize]) + u64::from(self.log[b as usize]);
        self.alpha_pow(e)
    }

    /// Evaluates a binary polynomial (bit mask, constant term at bit 0) at a
    /// field element.
    pub fn eval_poly(&self, poly: u128, at: u32) -> u32 {
        let mut acc = 0u32;
        let mut power = 1u32;
        for bit in 0..128 {
            if poly >> bit & 1 == 1 {
                acc ^= power;
            }
            power = self.mul(power, at);
            if poly >> bit >> 1 == 0 {
                break;
            }
        }
        acc
    }

    /// Minimal polynomial of `alpha^e` over GF(2): the product of
    /// `(x - alpha^(e * 2^j))` over the cyclotomic coset of `e`.
    pub fn minimal_polynomial(&self, e: u64) -> u128 {
        let order = u64::from(self.order());
        let e = e % order;
        // Cyclotomic coset {e, 2e, 4e, ...} mod 2^m - 1.
        let mut coset = vec![e];
        let mut next = e * 2 % order;
        while next != e {
            coset.push(next);
            next = next * 2 % order;
        }
        // Multiply out over GF(2^m); coefficients collapse to GF(2).
        let mut coeffs: Vec<u32> = vec![1];
        for &c in &coset {
            let root = self.alpha_pow(c);
            let mut out = vec![0u32; coeffs.len() + 1];
            for (i, &a) in coeffs.iter().enumerate() {
                out[i + 1] ^= a;
                out[i] ^= self.mul(a, root);
            }
            coeffs = out;
        }
        let mut bits = 0u128;
        for (i, &c) in coeffs.iter().enumerate() {
            debug_assert!(c <= 1, "coefficient escaped the prime subfield");
            if c == 1 {
                bits |= 1 << i;
            }
        }
        bits
    }
}

pub fn poly_degree(poly: u128) -> u32 {
    debug_assert!(poly != 0, "degree of the zero polynomial");
    127 - poly.leading_zeros()
}

pub fn poly_mul(a: u128, b: u128) -> u128 {
    let mut out = 0u128;
    let mut a = a;
    let mut shift = 0;
    while a != 0 {
        if a & 1 == 1 {
            out ^= b << shift;
        }
        a >>= 1;
        shift += 1;
    }
    out
}

/// Generator polynomial for a primitive narrow-sense binary BCH code over
/// GF(2^m) with designed correction capability `t`.
///
/// Returns `(g, n, k)` with `n = 2^m - 1`, `g` the least common multiple of
/// the minimal polynomials of `alpha, alpha^3, ..., alpha^(2t-1)` and
/// `k = n - deg(g)`.
pub fn bch_generator(m: u32, t: u32) -> Result<(u128, usize, usize)> {
    if !(2..=10).contains(&m) {
        return Err(Error::InvalidDimensions(format!(
            "field degree m = {m} outside the tabulated range 2..=10"
        )));
    }
    let n = (1usize << m) - 1;
    if t == 0 || 2 * t as usize >= n {
        return Err(Error::InvalidDimensions(format!(
            "designed distance 2t+1 = {} does not fit in n = {n}",
            2 * t + 1
        )));
    }
    let field = Gf2m::new(m)?;
    // LCM of the minimal polynomials: consecutive powers share cosets, so
    // dedup by the polynomial itself before multiplying.
    let mut factors: Vec<u128> = Vec::new();
    let mut g = 1u128;
    for i in (1..=2 * u64::from(t) - 1).step_by(2) {
        let mp = field.minimal_polynomial(i);
        if factors.contains(&mp) {
            continue;
        }
        if poly_degree(g) + poly_degree(mp) > 120 {
            return Err(Error::TooLarge(format!(
                "generator degree exceeds the u128 representation for (m, t) = ({m}, {t})"
            )));
        }
        factors.push(mp);
        g = poly_mul(g, mp);
    }
    let k = n - poly_degree(g) as usize;
    if k == 0 {
        return Err(Error::InvalidDimensions(format!(
            "(m, t) = ({m}, {t}) leaves no message bits"
        )));
    }
    Ok((g, n, k))
}
