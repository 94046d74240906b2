//! Arithmetic in `F_q`, `q = p^n` with `p` an odd prime.
//!
//! Elements are stored as their integer code `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`
//! where `(c_0, ..., c_{n-1})` are the coordinates in the power basis
//! `1, x, ..., x^{n-1}` of `F_p[x]/(modulus)`. Enumeration order is code order,
//! so the prime subfield appears first as `0, 1, ..., p-1`.
//!
//! Multiplication goes through discrete log tables built from the
//! distinguished generator `omega`; addition uses a table for small `q` and
//! coordinate-wise arithmetic otherwise.

use std::fmt;

use crate::error::{Error, Result};

/// Default upper bound on `q`.
pub const DEFAULT_MAX_Q: u64 = 81;

const ADD_TABLE_MAX_Q: u32 = 512;

/// An element of `F_q`, valid only together with the [`FieldCtx`] that made it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GfElem(u32);

impl GfElem {
    pub const ZERO: GfElem = GfElem(0);
    pub const ONE: GfElem = GfElem(1);

    /// Integer code of the element (its position in enumeration order).
    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

pub struct FieldCtx {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    omega: GfElem,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .field("omega", &self.omega.0)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        // modulus and omega are determined by (p, n)
        self.p == other.p && self.n == other.n
    }
}

impl Eq for FieldCtx {}

pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Polynomials over F_p as coefficient vectors, lowest degree first.

fn trim(v: &mut Vec<u32>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    // m is monic
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm && !(r.len() == 1 && r[0] == 0) {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let sub = (lead as u64 * c as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn is_zero_poly(v: &[u32]) -> bool {
    v.iter().all(|&c| c == 0)
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-`p`
/// digits of `idx`, with `c_0` as the most significant digit.
fn monic_from_index(idx: u64, deg: u32, p: u32) -> Vec<u32> {
    let mut coeffs = vec![0u32; deg as usize + 1];
    coeffs[deg as usize] = 1;
    let mut rest = idx;
    for i in (0..deg as usize).rev() {
        coeffs[i] = (rest % p as u64) as u32;
        rest /= p as u64;
    }
    coeffs
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let n = (m.len() - 1) as u32;
    for d in 1..=n / 2 {
        let count = (p as u64).pow(d);
        for idx in 0..count {
            let cand = monic_from_index(idx, d, p);
            if is_zero_poly(&poly_rem(m, &cand, p)) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, n: u32) -> Vec<u32> {
    let count = (p as u64).pow(n);
    (0..count)
        .map(|idx| monic_from_index(idx, n, p))
        .find(|m| is_irreducible(m, p))
        .expect("an irreducible polynomial of every degree exists")
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

impl FieldCtx {
    /// Builds `F_{p^n}` subject to the default cap `q <= 81`.
    pub fn new(p: i64, n: i64) -> Result<FieldCtx> {
        Self::with_cap(p, n, DEFAULT_MAX_Q)
    }

    pub fn with_cap(p: i64, n: i64, max_q: u64) -> Result<FieldCtx> {
        if p < 2 || !is_prime(p as u64) {
            return Err(Error::NotPrime(p.max(0) as u64));
        }
        if p == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if n < 1 {
            return Err(Error::BadExtensionDegree(n));
        }
        let q = (p as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
        if q > max_q || q > u32::MAX as u64 / 2 {
            return Err(Error::FieldTooLarge { q, cap: max_q });
        }
        let (p, n, q) = (p as u32, n as u32, q as u32);
        let modulus = smallest_irreducible(p, n);

        let mut ctx = FieldCtx {
            p,
            n,
            q,
            modulus,
            omega: GfElem::ONE,
            exp: Vec::new(),
            log: Vec::new(),
            neg: Vec::new(),
            add: None,
        };
        ctx.neg = (0..q)
            .map(|c| ctx.code_from_coords(&ctx.coords_of_code(c).iter().map(|&x| (p - x) % p).collect::<Vec<_>>()))
            .collect();
        if q <= ADD_TABLE_MAX_Q {
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = ctx.add_slow(a, b);
                }
            }
            ctx.add = Some(table);
        }

        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let omega = (1..q)
            .find(|&c| factors.iter().all(|&r| ctx.pow_slow(c, order / r) != 1))
            .expect("F_q^* is cyclic");
        ctx.omega = GfElem(omega);
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for i in 0..order as u32 {
            exp.push(cur);
            log[cur as usize] = i;
            cur = ctx.mul_slow(cur, omega);
        }
        ctx.exp = exp;
        ctx.log = log;
        Ok(ctx)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Monic modulus, lowest degree coefficient first (`x` when `n = 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The distinguished generator of `F_q^*`.
    pub fn omega(&self) -> GfElem {
        self.omega
    }

    fn coords_of_code(&self, mut code: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.n as usize);
        for _ in 0..self.n {
            out.push(code % self.p);
            code /= self.p;
        }
        out
    }

    fn code_from_coords(&self, coords: &[u32]) -> u32 {
        coords.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.n {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let (ca, cb) = (self.coords_of_code(a), self.coords_of_code(b));
        let p = self.p as u64;
        let mut prod = vec![0u32; ca.len() + cb.len() - 1];
        for (i, &x) in ca.iter().enumerate() {
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p) as u32;
            }
        }
        let mut r = if self.n == 1 {
            vec![prod[0]]
        } else {
            poly_rem(&prod, &self.modulus, self.p)
        };
        r.resize(self.n as usize, 0);
        self.code_from_coords(&r)
    }

    fn pow_slow(&self, a: u32, mut e: u64) -> u32 {
        let (mut base, mut acc) = (a, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn zero(&self) -> GfElem {
        GfElem::ZERO
    }

    pub fn one(&self) -> GfElem {
        GfElem::ONE
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> GfElem {
        GfElem(v.rem_euclid(self.p as i64) as u32)
    }

    /// Element with the given power-basis coordinates (reduced mod `p`, padded with zeros).
    pub fn from_coords(&self, coords: &[i64]) -> Result<GfElem> {
        if coords.len() > self.n as usize {
            return Err(Error::Parse(format!(
                "{} coordinates given for a degree-{} extension",
                coords.len(),
                self.n
            )));
        }
        let mut c: Vec<u32> = coords.iter().map(|&v| v.rem_euclid(self.p as i64) as u32).collect();
        c.resize(self.n as usize, 0);
        Ok(GfElem(self.code_from_coords(&c)))
    }

    pub fn from_code(&self, code: u32) -> Result<GfElem> {
        if code >= self.q {
            return Err(Error::Parse(format!("element code {code} out of range for F_{}", self.q)));
        }
        Ok(GfElem(code))
    }

    pub fn coords(&self, x: GfElem) -> Vec<u32> {
        self.coords_of_code(x.0)
    }

    /// The primitive element `x` of the power basis (equals `0` when `n = 1`).
    pub fn basis_x(&self) -> GfElem {
        if self.n == 1 {
            GfElem::ZERO
        } else {
            GfElem(self.p)
        }
    }

    #[inline]
    pub fn add(&self, a: GfElem, b: GfElem) -> GfElem {
        match &self.add {
            Some(t) => GfElem(t[(a.0 * self.q + b.0) as usize]),
            None => GfElem(self.add_slow(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: GfElem) -> GfElem {
        GfElem(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: GfElem, b: GfElem) -> GfElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: GfElem, b: GfElem) -> GfElem {
        if a.0 == 0 || b.0 == 0 {
            return GfElem::ZERO;
        }
        let order = self.q - 1;
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        GfElem(self.exp[(if s >= order { s - order } else { s }) as usize])
    }

    pub fn inv(&self, a: GfElem) -> Result<GfElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let order = self.q - 1;
        let l = self.log[a.0 as usize];
        Ok(GfElem(self.exp[((order - l) % order) as usize]))
    }

    pub fn div(&self, a: GfElem, b: GfElem) -> Result<GfElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: GfElem, e: u64) -> GfElem {
        if e == 0 {
            return GfElem::ONE;
        }
        if a.is_zero() {
            return GfElem::ZERO;
        }
        let order = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        GfElem(self.exp[((l * (e % order)) % order) as usize])
    }

    /// `omega^k` for any integer `k`.
    pub fn omega_pow(&self, k: i64) -> GfElem {
        let order = (self.q - 1) as i64;
        GfElem(self.exp[k.rem_euclid(order) as usize])
    }

    /// Discrete logarithm to base `omega`.
    pub fn log(&self, a: GfElem) -> Result<u32> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.log[a.0 as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: GfElem) -> Result<u32> {
        let l = self.log(a)?;
        let m = self.q - 1;
        Ok(m / gcd(l, m))
    }

    /// True iff `x^((q-1)/2) = 1`, i.e. `x` is an even power of `omega`.
    pub fn is_quadratic_residue(&self, x: GfElem) -> Result<bool> {
        if x.is_zero() {
            return Err(Error::ZeroResidueClass);
        }
        Ok(self.pow(x, ((self.q - 1) / 2) as u64) == GfElem::ONE)
    }

    /// All `q` elements in code order.
    pub fn enumerate(&self) -> Vec<GfElem> {
        (0..self.q).map(GfElem).collect()
    }

    /// The `q - 1` nonzero elements in code order.
    pub fn units(&self) -> Vec<GfElem> {
        (1..self.q).map(GfElem).collect()
    }

    /// Quadratic residues in code order.
    pub fn residues(&self) -> Vec<GfElem> {
        self.units()
            .into_iter()
            .filter(|&x| self.log[x.0 as usize].is_multiple_of(2))
            .collect()
    }

    /// Quadratic nonresidues in code order.
    pub fn nonresidues(&self) -> Vec<GfElem> {
        self.units()
            .into_iter()
            .filter(|&x| self.log[x.0 as usize] % 2 == 1)
            .collect()
    }

    /// Human readable form: an integer for prime-subfield elements,
    /// otherwise a parenthesised polynomial in `x`, e.g. `(2x+1)`.
    pub fn format(&self, a: GfElem) -> String {
        let c = self.coords(a);
        if c.iter().skip(1).all(|&v| v == 0) {
            return c[0].to_string();
        }
        let mut parts = Vec::new();
        for (i, &v) in c.iter().enumerate().rev() {
            if v == 0 {
                continue;
            }
            let coeff = if v == 1 && i > 0 { String::new() } else { v.to_string() };
            parts.push(match i {
                0 => coeff,
                1 => format!("{coeff}x"),
                _ => format!("{coeff}x^{i}"),
            });
        }
        format!("({})", parts.join("+"))
    }

    /// Inverse of [`FieldCtx::format`]; also accepts signed integers.
    pub fn parse(&self, s: &str) -> Result<GfElem> {
        let s = s.trim();
        let inner = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s);
        let inner = inner.replace(' ', "");
        if inner.is_empty() {
            return Err(Error::Parse("empty field element".into()));
        }
        let mut coords = vec![0i64; self.n as usize];
        let mut rest = inner.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let (piece, tail) = body.split_at(end);
            rest = tail;
            let (coeff, power) = match piece.find('x') {
                None => (piece, 0usize),
                Some(pos) => {
                    let power = match piece[pos + 1..].strip_prefix('^') {
                        Some(e) => e.parse().map_err(|_| Error::Parse(format!("bad exponent in '{s}'")))?,
                        None if pos + 1 == piece.len() => 1,
                        None => return Err(Error::Parse(format!("bad field element '{s}'"))),
                    };
                    (&piece[..pos], power)
                }
            };
            let coeff: i64 = match coeff.trim_end_matches('*') {
                "" => 1,
                c => c.parse().map_err(|_| Error::Parse(format!("bad field element '{s}'")))?,
            };
            if power >= self.n as usize {
                return Err(Error::Parse(format!("power x^{power} outside the basis of F_{}", self.q)));
            }
            coords[power] += sign * coeff;
        }
        self.from_coords(&coords)
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f7_generator_is_three() {
        // 2 has order 3 in F_7; 3 has order 6
        let f = FieldCtx::new(7, 1).unwrap();
        assert_eq!(f.q(), 7);
        assert_eq!(f.omega().code(), 3);
    }

    #[test]
    fn f9_modulus_is_x2_plus_1() {
        let f = FieldCtx::new(3, 2).unwrap();
        assert_eq!(f.q(), 9);
        assert_eq!(f.modulus(), &[1, 0, 1]);
        let x = f.basis_x();
        assert_eq!(f.mul(x, x), f.from_int(2));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(FieldCtx::new(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(FieldCtx::new(2, 1), Err(Error::CharacteristicTwo)));
        assert!(matches!(FieldCtx::new(3, 0), Err(Error::BadExtensionDegree(0))));
        assert!(matches!(FieldCtx::new(3, 5), Err(Error::FieldTooLarge { q: 243, .. })));
        assert!(FieldCtx::with_cap(3, 5, 243).is_ok());
    }

    #[test]
    fn small_arithmetic() {
        let f = FieldCtx::new(7, 1).unwrap();
        assert_eq!(f.inv(f.from_int(3)).unwrap(), f.from_int(5));
        assert_eq!(f.pow(f.from_int(3), 6), f.one());
        assert_eq!(f.pow(f.from_int(0), 0), f.one());
        assert!(matches!(f.inv(f.zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn residue_classes() {
        let f7 = FieldCtx::new(7, 1).unwrap();
        let squares: std::collections::BTreeSet<_> = f7.units().iter().map(|&x| f7.mul(x, x)).collect();
        let res: std::collections::BTreeSet<_> = f7.residues().into_iter().collect();
        assert_eq!(squares, res);
        assert_eq!(res.iter().map(|x| x.code()).collect::<Vec<_>>(), vec![1, 2, 4]);

        let f3 = FieldCtx::new(3, 1).unwrap();
        assert_eq!(f3.residues(), vec![f3.from_int(1)]);
        assert_eq!(f3.nonresidues(), vec![f3.from_int(2)]);
        assert!(f3.is_quadratic_residue(f3.one()).unwrap());
        assert!(matches!(f3.is_quadratic_residue(f3.zero()), Err(Error::ZeroResidueClass)));
    }

    #[test]
    fn enumeration() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        assert_eq!(f3.enumerate().iter().map(|x| x.code()).collect::<Vec<_>>(), vec![0, 1, 2]);
        let f9 = FieldCtx::new(3, 2).unwrap();
        let all: std::collections::BTreeSet<_> = f9.enumerate().into_iter().collect();
        assert_eq!(all.len(), 9);
        let f7 = FieldCtx::new(7, 1).unwrap();
        assert_eq!(f7.units().len(), 6);
        assert!(f7.units().iter().all(|x| !x.is_zero()));
    }

    fn all_test_fields() -> Vec<FieldCtx> {
        [(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1), (5, 2), (3, 3), (7, 2), (3, 4)]
            .iter()
            .map(|&(p, n)| FieldCtx::new(p, n).unwrap())
            .collect()
    }

    #[test]
    fn fermat_and_residue_group_structure() {
        for f in all_test_fields() {
            let half = ((f.q() - 1) / 2) as usize;
            for x in f.units() {
                assert_eq!(f.pow(x, (f.q() - 1) as u64), f.one());
            }
            let (res, non) = (f.residues(), f.nonresidues());
            assert_eq!(res.len(), half);
            assert_eq!(non.len(), half);
            for &a in &res {
                for &b in &res {
                    assert!(f.is_quadratic_residue(f.mul(a, b)).unwrap());
                }
                for &b in &non {
                    assert!(!f.is_quadratic_residue(f.mul(a, b)).unwrap());
                }
            }
        }
    }

    #[test]
    fn omega_powers_cover_units_once() {
        for f in all_test_fields() {
            let mut seen = vec![false; f.q() as usize];
            for k in 0..(f.q() - 1) as i64 {
                let c = f.omega_pow(k).code() as usize;
                assert!(!seen[c]);
                seen[c] = true;
            }
            assert!(!seen[0]);
            assert_eq!(f.order(f.omega()).unwrap(), f.q() - 1);
        }
    }

    #[test]
    fn table_arithmetic_matches_schoolbook() {
        for f in all_test_fields() {
            for a in 0..f.q() {
                for b in 0..f.q() {
                    assert_eq!(f.mul(GfElem(a), GfElem(b)).0, f.mul_slow(a, b));
                    assert_eq!(f.add(GfElem(a), GfElem(b)).0, f.add_slow(a, b));
                }
            }
        }
    }

    #[test]
    fn format_parse_roundtrip() {
        for f in all_test_fields() {
            for x in f.enumerate() {
                assert_eq!(f.parse(&f.format(x)).unwrap(), x, "{}", f.format(x));
            }
        }
        let f9 = FieldCtx::new(3, 2).unwrap();
        assert_eq!(f9.parse("-1").unwrap(), f9.from_int(2));
        assert_eq!(f9.format(f9.basis_x()), "(x)");
    }
}
