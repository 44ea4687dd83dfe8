//! Finite fields `F_q`, `q = p^m`.
//!
//! An element is encoded as the integer `c_0 + c_1 p + ... + c_{m-1} p^{m-1}` where
//! `c_0 + c_1 x + ...` is its representative modulo the defining polynomial.

use std::fmt;

use crate::{Error, Result};

const TABLE_LIMIT: u32 = 256;

#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    m: u32,
    q: u32,
    /// Monic defining polynomial, coefficients from constant term up; `[0, 1]` for `m = 1`.
    modulus: Vec<u32>,
    mul_table: Option<Vec<u32>>,
    inv_table: Vec<u32>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Writes `q = p^m` with `p` prime.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).expect("q >= 2 has a prime factor");
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    if rest != 1 {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p, m))
}

/// Built-in irreducible polynomials for small non-prime fields, low degree first.
fn default_modulus(q: u64) -> Option<Vec<u32>> {
    Some(match q {
        4 => vec![1, 1, 1],
        8 => vec![1, 1, 0, 1],
        9 => vec![1, 0, 1],
        16 => vec![1, 1, 0, 0, 1],
        25 => vec![2, 0, 1],
        27 => vec![1, 2, 0, 1],
        _ => return None,
    })
}

impl FieldSpec {
    /// `F_{p^m}`. For `m > 1` the modulus must be monic of degree `m` (coefficients
    /// from the constant term up) and irreducible; `None` selects a built-in one.
    pub fn new(p: u64, m: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::InvalidModulus("extension degree must be >= 1".into()));
        }
        let q = p
            .checked_pow(m)
            .filter(|&q| q <= u32::MAX as u64 / 2)
            .ok_or(Error::Overflow)?;
        let p32 = p as u32;
        let modulus = if m == 1 {
            if modulus.is_some_and(|c| !c.is_empty()) {
                return Err(Error::InvalidModulus("prime fields take no modulus".into()));
            }
            vec![0, 1]
        } else {
            let c = match modulus {
                Some(c) => c.to_vec(),
                None => default_modulus(q).ok_or(Error::NoDefaultModulus(q))?,
            };
            if c.len() != m as usize + 1 || c[m as usize] != 1 {
                return Err(Error::InvalidModulus(format!(
                    "expected a monic polynomial of degree {m}, got {c:?}"
                )));
            }
            if c.iter().any(|&x| x >= p32) {
                return Err(Error::InvalidModulus(format!("coefficients must be < {p}")));
            }
            if !is_irreducible(&c, p32) {
                return Err(Error::ReducibleModulus(p32));
            }
            c
        };
        let mut field = FieldSpec {
            p: p32,
            m,
            q: q as u32,
            modulus,
            mul_table: None,
            inv_table: Vec::new(),
        };
        if field.q <= TABLE_LIMIT {
            let q = field.q;
            let table = (0..q * q).map(|ab| field.mul_slow(ab / q, ab % q)).collect();
            field.mul_table = Some(table);
            field.inv_table = (0..q)
                .map(|a| (1..q).find(|&b| field.mul(a, b) == 1).unwrap_or(0))
                .collect();
        }
        Ok(field)
    }

    /// `F_q` with the built-in modulus when `q` is not prime.
    pub fn from_order(q: u64) -> Result<Self> {
        let (p, m) = prime_power(q)?;
        FieldSpec::new(p, m, None)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.q
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        (0..self.m)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    fn encode(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.m {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.m == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let d: Vec<u32> = self.digits(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.encode(&d)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.mul_table {
            Some(t) => t[(a * self.q + b) as usize],
            None => self.mul_slow(a, b),
        }
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let p = self.p as u64;
        let m = self.m as usize;
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for k in (m..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for (j, &mj) in self.modulus[..m].iter().enumerate() {
                prod[k - m + j] = (prod[k - m + j] + (p - c) * mj as u64) % p;
            }
            prod[k] = 0;
        }
        let low: Vec<u32> = prod[..m].iter().map(|&x| x as u32).collect();
        self.encode(&low)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        if !self.inv_table.is_empty() {
            return Some(self.inv_table[a as usize]);
        }
        // a^(q-2)
        let mut result = 1;
        let mut base = a;
        let mut e = self.q - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        Some(result)
    }

    pub fn units(&self) -> usize {
        (1..self.q).filter(|&a| self.inv(a).is_some()).count()
    }
}

/// Remainder of `a` modulo `b` over `F_p`, with `b` monic; coefficient vectors low first.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&x| x as u64).collect();
    let db = b.len() - 1;
    let p = p as u64;
    while r.len() > db {
        let c = r[r.len() - 1] % p;
        let shift = r.len() - 1 - db;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[shift + j] = (r[shift + j] + (p - c) * bj as u64) % p;
            }
        }
        r.pop();
    }
    r.into_iter().map(|x| x as u32).collect()
}

/// No monic factor of degree `1..=deg/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                g.push((c % p as u64) as u32);
                c /= p as u64;
            }
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}
