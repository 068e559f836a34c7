use crate::error::{Error, Result};
use crate::numtheory::{is_prime, prime_power};

/// Largest field for which full operation tables are built.
pub const MAX_FIELD_ORDER: u64 = 1024;

/// Monic moduli (coefficients low degree first, leading 1 omitted) for the
/// non-prime orders used by default.
const BUNDLED: &[(u64, u64, &[u64])] = &[
    (4, 2, &[1, 1]),
    (8, 2, &[1, 1, 0]),
    (9, 3, &[1, 0]),
    (16, 2, &[1, 1, 0, 0]),
    (25, 5, &[2, 0]),
    (27, 3, &[1, 2, 0]),
    (32, 2, &[1, 0, 1, 0, 0]),
    (49, 7, &[1, 0]),
    (64, 2, &[1, 1, 0, 1, 1, 0]),
];

/// `F_{p^m}` with table-backed arithmetic. An element `Σ a_i x^i` is encoded
/// as the integer `Σ a_i p^i`.
#[derive(Clone, Debug)]
pub struct FqField {
    p: u64,
    m: u32,
    q: u64,
    /// Monic modulus, low degree first, length `m + 1`.
    modulus: Vec<u64>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FqField {}

impl FqField {
    /// The field of order `q`, using the bundled modulus when there is one
    /// and otherwise the lexicographically first monic irreducible.
    pub fn new(q: u64) -> Result<Self> {
        let (p, m) = prime_power(q)
            .ok_or_else(|| Error::InvalidParameters(format!("{q} is not a prime power")))?;
        if q > MAX_FIELD_ORDER {
            return Err(Error::InvalidParameters(format!(
                "field order {q} exceeds {MAX_FIELD_ORDER}"
            )));
        }
        if m == 1 {
            return Self::with_modulus(p, &[0, 1]);
        }
        if let Some((_, _, low)) = BUNDLED.iter().find(|(qq, _, _)| *qq == q) {
            let mut coeffs = low.to_vec();
            coeffs.push(1);
            return Self::with_modulus(p, &coeffs);
        }
        let modulus = first_irreducible(p, m);
        Self::with_modulus(p, &modulus)
    }

    /// `F_p[x]/(modulus)` with `modulus` monic, coefficients low degree
    /// first. Irreducibility is verified.
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParameters(format!("{p} is not prime")));
        }
        let modulus: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidParameters(
                "modulus must be monic of degree ≥ 1".into(),
            ));
        }
        let m = (modulus.len() - 1) as u32;
        if !is_irreducible(p, &modulus) {
            return Err(Error::InvalidParameters(format!(
                "modulus {modulus:?} is reducible over F_{p}"
            )));
        }
        let q = p.pow(m);
        if q > MAX_FIELD_ORDER {
            return Err(Error::InvalidParameters(format!(
                "field order {q} exceeds {MAX_FIELD_ORDER}"
            )));
        }
        let qs = q as usize;
        let digits = |x: u64| -> Vec<u64> {
            let mut d = vec![0; m as usize];
            let mut x = x;
            for c in d.iter_mut() {
                *c = x % p;
                x /= p;
            }
            d
        };
        let encode = |d: &[u64]| -> u32 { d.iter().rev().fold(0, |acc, &c| acc * p + c) as u32 };
        let all: Vec<Vec<u64>> = (0..q).map(digits).collect();
        let mut add = vec![0u32; qs * qs];
        let mut mul = vec![0u32; qs * qs];
        for a in 0..qs {
            for b in 0..qs {
                let s: Vec<u64> = all[a]
                    .iter()
                    .zip(&all[b])
                    .map(|(x, y)| (x + y) % p)
                    .collect();
                add[a * qs + b] = encode(&s);
                mul[a * qs + b] = encode(&poly_mulmod(p, &all[a], &all[b], &modulus));
            }
        }
        let mut neg = vec![0u32; qs];
        let mut inv = vec![0u32; qs];
        for a in 0..qs {
            neg[a] = (0..qs).find(|&b| add[a * qs + b] == 0).unwrap() as u32;
            if a != 0 {
                inv[a] = (1..qs)
                    .find(|&b| mul[a * qs + b] == 1)
                    .ok_or_else(|| Error::InvalidParameters("modulus is not irreducible".into()))?
                    as u32;
            }
        }
        Ok(FqField {
            p,
            m,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.inv[a as usize])
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, k: i64) -> u32 {
        k.rem_euclid(self.p as i64) as u32
    }

    /// `1/2`, defined only in odd characteristic.
    pub fn half(&self) -> Option<u32> {
        self.inv(self.from_int(2))
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q as u32
    }

    /// Coordinates over `F_p` of an element, low degree first.
    pub fn coords(&self, a: u32) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.m as usize);
        let mut x = a as u64;
        for _ in 0..self.m {
            out.push(x % self.p);
            x /= self.p;
        }
        out
    }
}

/// `a·b mod modulus` over `F_p`; `a`, `b` have degree `< m`.
fn poly_mulmod(p: u64, a: &[u64], b: &[u64], modulus: &[u64]) -> Vec<u64> {
    let m = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * m.max(1)];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(p, &mut prod, modulus);
    prod.truncate(m);
    prod.resize(m, 0);
    prod
}

/// Reduces `a` modulo the monic `modulus` in place.
fn poly_rem(p: u64, a: &mut [u64], modulus: &[u64]) {
    let m = modulus.len() - 1;
    for top in (m..a.len()).rev() {
        let c = a[top];
        if c == 0 {
            continue;
        }
        for (k, &mk) in modulus.iter().enumerate() {
            let idx = top - m + k;
            a[idx] = (a[idx] + p - c * mk % p) % p;
        }
    }
}

/// True if the monic `f` has no monic factor of degree `1..=deg/2`.
pub fn is_irreducible(p: u64, f: &[u64]) -> bool {
    let deg = f.len() - 1;
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut x = low;
            for _ in 0..d {
                g.push(x % p);
                x /= p;
            }
            g.push(1);
            let mut r = f.to_vec();
            poly_rem(p, &mut r, &g);
            if r[..d].iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn first_irreducible(p: u64, m: u32) -> Vec<u64> {
    let count = p.pow(m);
    for low in 0..count {
        let mut f = Vec::with_capacity(m as usize + 1);
        let mut x = low;
        for _ in 0..m {
            f.push(x % p);
            x /= p;
        }
        f.push(1);
        if is_irreducible(p, &f) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
