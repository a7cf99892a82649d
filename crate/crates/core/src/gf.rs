//! Finite fields GF(p^m).
//!
//! Elements are stored as their canonical index: the coefficient vector of
//! the representative polynomial (degree < m) read as a radix-p integer,
//! with the constant coefficient least significant. Index 0 is zero and
//! index 1 is one. Fields with q <= 2^12 get log/antilog tables; larger
//! ones multiply polynomials on the fly.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default cap on the field order.
pub const DEFAULT_SIZE_LIMIT: u64 = 1 << 20;

/// Fields up to this order use precomputed multiplication tables.
pub const TABLE_LIMIT: u64 = 1 << 12;

/// Hard ceiling imposed by the `u32` element encoding.
const ENCODING_LIMIT: u64 = 1 << 31;

/// A field element, identified by its canonical index in `[0, q)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    /// Wraps a raw index without range checking. Prefer [`FieldCtx::elem`].
    pub const fn from_index_unchecked(index: u32) -> Self {
        FieldElem(index)
    }

    pub const fn index(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Arithmetic operation selector for [`FieldCtx::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Neg,
    Inv,
}

impl Op {
    fn name(self) -> &'static str {
        match self {
            Op::Add => "add",
            Op::Sub => "sub",
            Op::Mul => "mul",
            Op::Neg => "neg",
            Op::Inv => "inv",
        }
    }
}

#[derive(Debug)]
struct Tables {
    /// `exp[i] = g^i` for `i < 2(q-1)`, so a sum of two logs needs no reduction.
    exp: Vec<u32>,
    /// `log[x]` for `x != 0`; `log[0]` is unused.
    log: Vec<u32>,
    inv: Vec<u32>,
}

/// Arithmetic context for GF(p^m).
///
/// Immutable after construction and freely shareable across threads.
#[derive(Debug)]
pub struct FieldCtx {
    p: u32,
    m: u32,
    q: u32,
    /// Monic modulus, coefficients low to high, length `m + 1`.
    modulus: Vec<u32>,
    /// `Tr(x^i)` for `i < m`; the trace is linear over GF(p).
    basis_trace: Vec<u32>,
    neg: Vec<u32>,
    tables: Option<Tables>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

impl FieldCtx {
    /// Builds GF(p^m) under the default size limit.
    ///
    /// `modulus`, when given, lists the coefficients of a degree-m polynomial
    /// from the leading term down to the constant term. Without it the
    /// lexicographically smallest monic irreducible of degree m is used.
    pub fn new(p: u64, m: u32, modulus: Option<&[u64]>) -> Result<Self> {
        Self::with_limit(p, m, modulus, DEFAULT_SIZE_LIMIT)
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1, None)
    }

    pub fn with_limit(p: u64, m: u32, modulus: Option<&[u64]>, limit: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::ZeroDegree);
        }
        let limit = limit.min(ENCODING_LIMIT);
        let q = checked_order(p, m).filter(|&q| q <= limit);
        let Some(q) = q else {
            return Err(Error::FieldTooLarge { p, m, limit });
        };

        let modulus = match modulus {
            Some(coeffs) => normalize_modulus(p, m, coeffs)?,
            None if m == 1 => vec![0, 1],
            None => smallest_irreducible(p, m),
        };

        let mut ctx = FieldCtx {
            p: p as u32,
            m,
            q: q as u32,
            modulus,
            basis_trace: Vec::new(),
            neg: Vec::new(),
            tables: None,
        };
        ctx.neg = (0..ctx.q).map(|x| ctx.neg_slow(x)).collect();
        if q <= TABLE_LIMIT {
            ctx.tables = Some(ctx.build_tables());
        }
        ctx.basis_trace = (0..m)
            .map(|i| ctx.trace_slow(ctx.x_power_elem(i)))
            .collect();
        Ok(ctx)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Monic modulus coefficients, leading term first.
    pub fn modulus(&self) -> Vec<u32> {
        self.modulus.iter().rev().copied().collect()
    }

    /// Specification string that reproduces this field exactly.
    pub fn spec_string(&self) -> String {
        if self.m == 1 {
            self.p.to_string()
        } else {
            let coeffs: Vec<String> = self.modulus().iter().map(u32::to_string).collect();
            format!("{}^{}/{}", self.p, self.m, coeffs.join(","))
        }
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn elem(&self, index: u64) -> Result<FieldElem> {
        if index < self.q as u64 {
            Ok(FieldElem(index as u32))
        } else {
            Err(Error::ElementOutOfRange { index, q: self.q as u64 })
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + Clone {
        (0..self.q).map(FieldElem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElem> + Clone {
        (1..self.q).map(FieldElem)
    }

    /// Coefficient vector, constant term first.
    pub fn coeffs(&self, x: FieldElem) -> Vec<u32> {
        let mut v = x.0;
        (0..self.m)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> FieldElem {
        let mut idx = 0u32;
        for &c in coeffs.iter().rev() {
            idx = idx * self.p + c % self.p;
        }
        FieldElem(idx)
    }

    /// Checked dispatcher over the five field operations.
    pub fn arith(&self, op: Op, x: FieldElem, y: Option<FieldElem>) -> Result<FieldElem> {
        self.check(x)?;
        if let Some(y) = y {
            self.check(y)?;
        }
        let need = |y: Option<FieldElem>| y.ok_or(Error::MissingOperand(op.name()));
        match op {
            Op::Add => Ok(self.add(x, need(y)?)),
            Op::Sub => Ok(self.sub(x, need(y)?)),
            Op::Mul => Ok(self.mul(x, need(y)?)),
            Op::Neg => Ok(self.neg(x)),
            Op::Inv => self.inv(x),
        }
    }

    fn check(&self, x: FieldElem) -> Result<()> {
        self.elem(x.0 as u64).map(|_| ())
    }

    #[inline]
    pub fn add(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        if self.m == 1 {
            let s = x.0 + y.0;
            return FieldElem(if s >= self.p { s - self.p } else { s });
        }
        let (mut a, mut b) = (x.0, y.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.m {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            a /= self.p;
            b /= self.p;
            place = place.wrapping_mul(self.p);
        }
        FieldElem(out)
    }

    #[inline]
    pub fn neg(&self, x: FieldElem) -> FieldElem {
        FieldElem(self.neg[x.0 as usize])
    }

    #[inline]
    pub fn sub(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        if x.0 == 0 || y.0 == 0 {
            return FieldElem::ZERO;
        }
        if let Some(t) = &self.tables {
            let l = t.log[x.0 as usize] + t.log[y.0 as usize];
            return FieldElem(t.exp[l as usize]);
        }
        self.mul_slow(x.0, y.0)
    }

    pub fn inv(&self, x: FieldElem) -> Result<FieldElem> {
        if x.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        if let Some(t) = &self.tables {
            return Ok(FieldElem(t.inv[x.0 as usize]));
        }
        Ok(self.pow(x, self.q as u64 - 2))
    }

    pub fn div(&self, x: FieldElem, y: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn pow(&self, x: FieldElem, mut e: u64) -> FieldElem {
        let mut base = x;
        let mut acc = FieldElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Absolute trace to the prime field, returned as an integer in `[0, p)`.
    pub fn trace(&self, x: FieldElem) -> u32 {
        if self.m == 1 {
            return x.0;
        }
        let p = self.p as u64;
        let mut v = x.0;
        let mut acc = 0u64;
        for &t in &self.basis_trace {
            acc += (v % self.p) as u64 * t as u64;
            v /= self.p;
        }
        (acc % p) as u32
    }

    /// Whether a nonzero `x` is a square. Every element is a square in
    /// characteristic two.
    pub fn is_quadratic_residue(&self, x: FieldElem) -> Result<bool> {
        if x.0 == 0 {
            return Err(Error::ZeroResidue);
        }
        if self.p == 2 {
            return Ok(true);
        }
        Ok(self.pow(x, (self.q as u64 - 1) / 2) == FieldElem::ONE)
    }

    /// Real part of the additive character `chi_a(x) = exp(2 pi i Tr(a x) / p)`.
    pub fn char_re<T: Real>(&self, a: FieldElem, x: FieldElem) -> T {
        self.char_angle::<T>(a, x).cos()
    }

    /// Imaginary part of the additive character.
    pub fn char_im<T: Real>(&self, a: FieldElem, x: FieldElem) -> T {
        self.char_angle::<T>(a, x).sin()
    }

    fn char_angle<T: Real>(&self, a: FieldElem, x: FieldElem) -> T {
        let t = self.trace(self.mul(a, x));
        T::TAU() * T::from_count(t as u64) / T::from_count(self.p as u64)
    }

    fn x_power_elem(&self, i: u32) -> FieldElem {
        // x^i for i < m is the basis vector e_i.
        FieldElem(self.p.pow(i))
    }

    fn neg_slow(&self, x: u32) -> u32 {
        let digits: Vec<u32> = {
            let mut v = x;
            (0..self.m)
                .map(|_| {
                    let d = v % self.p;
                    v /= self.p;
                    (self.p - d) % self.p
                })
                .collect()
        };
        self.from_coeffs(&digits).0
    }

    fn trace_slow(&self, x: FieldElem) -> u32 {
        let mut acc = FieldElem::ZERO;
        let mut y = x;
        for _ in 0..self.m {
            acc = self.add(acc, y);
            y = self.pow(y, self.p as u64);
        }
        debug_assert!(acc.0 < self.p, "trace must land in the prime field");
        acc.0
    }

    fn mul_slow(&self, x: u32, y: u32) -> FieldElem {
        let p = self.p as u64;
        let a: Vec<u64> = self.coeffs(FieldElem(x)).into_iter().map(u64::from).collect();
        let b: Vec<u64> = self.coeffs(FieldElem(y)).into_iter().map(u64::from).collect();
        let f: Vec<u64> = self.modulus.iter().map(|&c| c as u64).collect();
        let r = fpoly::mul_mod(&a, &b, &f, p);
        let mut coeffs: Vec<u32> = r.into_iter().map(|c| c as u32).collect();
        coeffs.resize(self.m as usize, 0);
        self.from_coeffs(&coeffs)
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let order = q - 1;
        let mut exp = vec![0u32; 2 * order.max(1)];
        for g in 1..self.q {
            let mut x = 1u32;
            let mut period = 0usize;
            loop {
                exp[period] = x;
                period += 1;
                x = self.mul_slow(x, g).0;
                if x == 1 || period > order {
                    break;
                }
            }
            if period == order {
                break;
            }
        }
        for i in order..exp.len() {
            exp[i] = exp[i - order];
        }
        let mut log = vec![0u32; q];
        for (i, &x) in exp.iter().take(order).enumerate() {
            log[x as usize] = i as u32;
        }
        let mut inv = vec![0u32; q];
        for x in 1..q {
            inv[x] = exp[(order - log[x] as usize) % order];
        }
        Tables { exp, log, inv }
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

fn checked_order(p: u64, m: u32) -> Option<u64> {
    p.checked_pow(m)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Validates a user modulus (leading coefficient first) and returns it monic,
/// constant term first.
fn normalize_modulus(p: u64, m: u32, coeffs: &[u64]) -> Result<Vec<u32>> {
    if coeffs.len() != m as usize + 1 {
        return Err(Error::InvalidModulus(format!(
            "expected {} coefficients for degree {m}, got {}",
            m + 1,
            coeffs.len()
        )));
    }
    if let Some(&c) = coeffs.iter().find(|&&c| c >= p) {
        return Err(Error::InvalidModulus(format!("coefficient {c} is not reduced mod {p}")));
    }
    if coeffs[0] == 0 {
        return Err(Error::InvalidModulus("leading coefficient is zero".into()));
    }
    let lead_inv = fpoly::inv(coeffs[0], p);
    let mut f: Vec<u64> = coeffs.iter().rev().map(|&c| c * lead_inv % p).collect();
    fpoly::trim(&mut f);
    if m > 1 && !fpoly::is_irreducible(&f, p) {
        let shown: Vec<String> = coeffs.iter().map(u64::to_string).collect();
        return Err(Error::ReducibleModulus(shown.join(",")));
    }
    Ok(f.into_iter().map(|c| c as u32).collect())
}

/// Lexicographically smallest monic irreducible of degree `m`, comparing
/// coefficient vectors from the x^(m-1) term down to the constant term.
fn smallest_irreducible(p: u64, m: u32) -> Vec<u32> {
    let count = p.pow(m);
    for r in 0..count {
        let mut f: Vec<u64> = (0..m).map(|j| (r / p.pow(j)) % p).collect();
        f.push(1);
        if fpoly::is_irreducible(&f, p) {
            return f.into_iter().map(|c| c as u32).collect();
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Dense polynomials over GF(p), coefficients constant term first.
mod fpoly {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        let mut base = a % p;
        let mut e = p - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    }

    /// Remainder of `a` modulo a nonzero `f`.
    pub fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let df = f.len() - 1;
        let lead_inv = inv(f[df], p);
        while r.len() > df {
            let top = r.len() - 1;
            let factor = r[top] * lead_inv % p;
            let shift = top - df;
            for (i, &c) in f.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - factor * c % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        rem(&prod, f, p)
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn pow_mod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, f, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &b, f, p);
            }
            b = mul_mod(&b, &b, f, p);
            e >>= 1;
        }
        acc
    }

    /// Ben-Or test: a monic `f` of degree d is irreducible iff
    /// gcd(f, x^(p^i) - x) = 1 for every i <= d/2.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let d = f.len() - 1;
        if d <= 1 {
            return d == 1;
        }
        let x = vec![0u64, 1];
        let mut h = x.clone();
        for _ in 0..d / 2 {
            h = pow_mod(&h, p, f, p);
            let mut diff = h.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            let g = gcd(f, &diff, p);
            if g.len() > 1 || g.is_empty() {
                return false;
            }
        }
        true
    }
}

/// Parsed form of a field specification string: `p`, `p^m`, or
/// `p^m/c_m,...,c_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u64,
    pub m: u32,
    pub modulus: Option<Vec<u64>>,
}

impl FieldSpec {
    pub fn build(&self) -> Result<FieldCtx> {
        FieldCtx::new(self.p, self.m, self.modulus.as_deref())
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |token: &str, reason: &str| Error::FieldSpec {
            spec: s.to_string(),
            token: token.to_string(),
            reason: reason.to_string(),
        };
        let (head, modulus_part) = match s.split_once('/') {
            Some((h, tail)) => (h, Some(tail)),
            None => (s, None),
        };
        let (p_tok, m_tok) = match head.split_once('^') {
            Some((p, m)) => (p, Some(m)),
            None => (head, None),
        };
        let p: u64 = p_tok
            .trim()
            .parse()
            .map_err(|_| bad(p_tok, "characteristic must be a positive integer"))?;
        if !is_prime(p) {
            return Err(bad(p_tok, "characteristic is not prime"));
        }
        let m: u32 = match m_tok {
            Some(t) => t
                .trim()
                .parse()
                .ok()
                .filter(|&m| m >= 1)
                .ok_or_else(|| bad(t, "degree must be an integer >= 1"))?,
            None => 1,
        };
        let modulus = match modulus_part {
            None => None,
            Some(tail) => {
                if m_tok.is_none() {
                    return Err(bad(tail, "a modulus requires the p^m form"));
                }
                let mut coeffs = Vec::new();
                for tok in tail.split(',') {
                    let c: u64 = tok
                        .trim()
                        .parse()
                        .map_err(|_| bad(tok, "modulus coefficient must be an integer"))?;
                    if c >= p {
                        return Err(bad(tok, "modulus coefficient is not reduced mod p"));
                    }
                    coeffs.push(c);
                }
                if coeffs.len() != m as usize + 1 {
                    return Err(bad(tail, "modulus must list exactly m+1 coefficients"));
                }
                Some(coeffs)
            }
        };
        Ok(FieldSpec { p, m, modulus })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, m: u32) -> FieldCtx {
        FieldCtx::new(p, m, None).unwrap()
    }

    #[test]
    fn prime_field_construction() {
        let f = gf(5, 1);
        assert_eq!(f.q(), 5);
        assert!(matches!(FieldCtx::new(4, 1, None), Err(Error::NotPrime(4))));
        assert!(matches!(FieldCtx::new(1, 1, None), Err(Error::NotPrime(1))));
        assert!(matches!(FieldCtx::new(5, 0, None), Err(Error::ZeroDegree)));
    }

    #[test]
    fn gf9_default_modulus_is_x2_plus_1() {
        // Monic quadratics over GF(3) in lexicographic order: x^2 has root 0,
        // x^2+1 has no roots in {0,1,2}.
        let f = gf(3, 2);
        assert_eq!(f.modulus(), vec![1, 0, 1]);
        let x = f.elem(3).unwrap();
        assert_eq!(f.mul(x, x), f.elem(2).unwrap());
        assert_eq!(f.trace(x), 0);
        assert_eq!(f.trace(FieldElem::ZERO), 0);
    }

    #[test]
    fn other_default_moduli() {
        assert_eq!(gf(2, 2).modulus(), vec![1, 1, 1]);
        assert_eq!(gf(2, 3).modulus(), vec![1, 0, 1, 1]);
        assert_eq!(gf(2, 4).modulus(), vec![1, 0, 0, 1, 1]);
        assert_eq!(gf(5, 2).modulus(), vec![1, 0, 2]);
    }

    #[test]
    fn size_limit_and_reducible_modulus() {
        assert!(matches!(
            FieldCtx::new(2, 21, None),
            Err(Error::FieldTooLarge { .. })
        ));
        assert!(FieldCtx::with_limit(3, 3, None, 26).is_err());
        // x^2 + 2 = (x+1)(x+2) over GF(3)
        assert!(matches!(
            FieldCtx::new(3, 2, Some(&[1, 0, 2])),
            Err(Error::ReducibleModulus(_))
        ));
        assert!(FieldCtx::new(3, 2, Some(&[2, 0, 2])).is_ok());
    }

    #[test]
    fn prime_field_arith_examples() {
        let f = gf(5, 1);
        let e = |i| f.elem(i).unwrap();
        assert_eq!(f.arith(Op::Mul, e(2), Some(e(3))).unwrap(), e(1));
        assert_eq!(f.arith(Op::Inv, e(2), None).unwrap(), e(3));
        assert_eq!(f.arith(Op::Inv, e(0), None), Err(Error::ZeroInverse));
        assert!(matches!(
            f.arith(Op::Add, FieldElem::from_index_unchecked(7), Some(e(1))),
            Err(Error::ElementOutOfRange { .. })
        ));
        assert_eq!(f.arith(Op::Sub, e(1), None), Err(Error::MissingOperand("sub")));
        assert_eq!(f.trace(e(3)), 3);
    }

    #[test]
    fn residues() {
        let f5 = gf(5, 1);
        assert!(f5.is_quadratic_residue(f5.elem(4).unwrap()).unwrap());
        assert!(!f5.is_quadratic_residue(f5.elem(2).unwrap()).unwrap());
        assert_eq!(f5.is_quadratic_residue(FieldElem::ZERO), Err(Error::ZeroResidue));
        let f13 = gf(13, 1);
        let squares: Vec<u32> = f13
            .nonzero()
            .filter(|&x| f13.is_quadratic_residue(x).unwrap())
            .map(FieldElem::index)
            .collect();
        assert_eq!(squares, vec![1, 3, 4, 9, 10, 12]);
    }

    #[test]
    fn characters() {
        let f = gf(5, 1);
        let one = FieldElem::ONE;
        assert_eq!(f.char_re::<f64>(FieldElem::ZERO, f.elem(3).unwrap()), 1.0);
        assert!((f.char_re::<f64>(one, one) - 0.309_016_994_374_947_4).abs() < 1e-12);
        assert_eq!(f.char_re::<f64>(one, FieldElem::ZERO), 1.0);
    }

    #[test]
    fn table_and_slow_paths_agree() {
        for (p, m) in [(2u64, 5u32), (3, 4), (7, 2), (13, 1)] {
            let f = gf(p, m);
            assert!(f.has_tables());
            for x in f.elements() {
                for y in f.elements() {
                    let slow = if x.is_zero() || y.is_zero() {
                        FieldElem::ZERO
                    } else {
                        f.mul_slow(x.0, y.0)
                    };
                    assert_eq!(f.mul(x, y), slow);
                }
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = gf(2, 13);
        assert!(!f.has_tables());
        let x = f.elem(1234).unwrap();
        let y = f.inv(x).unwrap();
        assert_eq!(f.mul(x, y), FieldElem::ONE);
        assert_eq!(f.pow(x, f.q() as u64 - 1), FieldElem::ONE);
        let big = FieldCtx::prime(65_537).unwrap();
        let a = big.elem(40_000).unwrap();
        assert_eq!(big.mul(a, big.inv(a).unwrap()), FieldElem::ONE);
    }

    #[test]
    fn spec_parsing() {
        assert_eq!("5".parse::<FieldSpec>().unwrap(), FieldSpec { p: 5, m: 1, modulus: None });
        assert_eq!(
            "3^2/1,0,1".parse::<FieldSpec>().unwrap(),
            FieldSpec { p: 3, m: 2, modulus: Some(vec![1, 0, 1]) }
        );
        let err = "6".parse::<FieldSpec>().unwrap_err();
        assert!(err.to_string().contains("`6`"), "{err}");
        let err = "3^x".parse::<FieldSpec>().unwrap_err();
        assert!(err.to_string().contains("`x`"), "{err}");
        let err = "3^2/1,0,7".parse::<FieldSpec>().unwrap_err();
        assert!(err.to_string().contains("`7`"), "{err}");
        let err = "3^2/1,0".parse::<FieldSpec>().unwrap_err();
        assert!(err.to_string().contains("`1,0`"), "{err}");
        let f = "3^2/1,0,1".parse::<FieldSpec>().unwrap().build().unwrap();
        assert_eq!(f.spec_string(), "3^2/1,0,1");
        assert!("3^2/1,0,2".parse::<FieldSpec>().unwrap().build().is_err());
    }
}
