//! Exact p-adic valuations on the rationals, reduction to F_p and weighted
//! normalisation of valuation tuples.

use std::fmt;
use std::ops::Add;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qq(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// An odd prime p together with the p-adic valuation it defines.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ValuedContext {
    p: BigInt,
}

impl ValuedContext {
    pub fn new(p: impl Into<BigInt>) -> Result<Self> {
        let p = p.into();
        if p == BigInt::from(2) {
            return Err(Error::EvenPrime);
        }
        if p.sign() != Sign::Plus || !is_prime(p.magnitude()) {
            return Err(Error::NotPrime(p));
        }
        Ok(ValuedContext { p })
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    /// p^k as a rational, k may be negative.
    pub fn pow(&self, k: i64) -> Q {
        let m = num_traits::pow(self.p.clone(), k.unsigned_abs() as usize);
        if k >= 0 {
            Q::from_integer(m)
        } else {
            Q::new(BigInt::one(), m)
        }
    }
}

/// A valuation: an exact rational, or infinity for the valuation of zero.
///
/// Variant order makes every finite value compare below `Infinity`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(Q),
    Infinity,
}

impl Valuation {
    pub fn zero() -> Self {
        Valuation::Finite(Q::zero())
    }

    pub fn int(n: i64) -> Self {
        Valuation::Finite(q(n))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    pub fn finite(&self) -> Option<&Q> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Valuation::Finite(v) if v.is_zero())
    }

    /// Strictly positive; infinity counts as positive.
    pub fn is_positive(&self) -> bool {
        match self {
            Valuation::Finite(v) => v.is_positive(),
            Valuation::Infinity => true,
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Valuation::Finite(v) if v.is_negative())
    }

    /// Multiply by a positive integer.
    pub fn times(&self, k: u32) -> Self {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v * BigInt::from(k)),
            Valuation::Infinity => Valuation::Infinity,
        }
    }

    /// Add a finite rational.
    pub fn shifted(&self, by: &Q) -> Self {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v + by),
            Valuation::Infinity => Valuation::Infinity,
        }
    }
}

impl Add for &Valuation {
    type Output = Valuation;
    fn add(self, rhs: &Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        &self + &rhs
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// An element of F_p, stored as its representative in [0, p).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidueElement {
    value: BigInt,
    p: BigInt,
}

impl ResidueElement {
    pub fn new(value: impl Into<BigInt>, ctx: &ValuedContext) -> Self {
        let value = value.into().mod_floor(ctx.p());
        ResidueElement {
            value,
            p: ctx.p().clone(),
        }
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.value.to_u64()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn wrap(&self, v: BigInt) -> Self {
        ResidueElement {
            value: v.mod_floor(&self.p),
            p: self.p.clone(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.wrap(&self.value + &o.value)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.wrap(&self.value - &o.value)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.wrap(&self.value * &o.value)
    }

    pub fn neg(&self) -> Self {
        self.wrap(-&self.value)
    }

    pub fn pow(&self, e: u32) -> Self {
        self.wrap(self.value.modpow(&BigInt::from(e), &self.p))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.value.is_zero() {
            return None;
        }
        let e = &self.p - BigInt::from(2);
        Some(self.wrap(self.value.modpow(&e, &self.p)))
    }
}

impl ResidueElement {
    pub fn modulus(&self) -> &BigInt {
        &self.p
    }

    pub fn is_square(&self) -> bool {
        if self.value.is_zero() {
            return true;
        }
        let e = (&self.p - BigInt::one()) >> 1;
        self.value.modpow(&e, &self.p).is_one()
    }

    /// A square root in F_p (Tonelli-Shanks), if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.value.is_zero() {
            return Some(self.clone());
        }
        if !self.is_square() {
            return None;
        }
        let p = &self.p;
        let one = BigInt::one();
        let two = BigInt::from(2);
        let mut q = p - &one;
        let mut s = 0u32;
        while q.is_even() {
            q >>= 1;
            s += 1;
        }
        let mut z = two.clone();
        while self.wrap(z.clone()).is_square() {
            z += 1;
        }
        let mut m = s;
        let mut c = z.modpow(&q, p);
        let mut t = self.value.modpow(&q, p);
        let mut r = self.value.modpow(&((&q + &one) >> 1), p);
        while !t.is_one() {
            let mut i = 0u32;
            let mut t2 = t.clone();
            while !t2.is_one() {
                t2 = (&t2 * &t2).mod_floor(p);
                i += 1;
            }
            let b = c.modpow(&(BigInt::one() << (m - i - 1)), p);
            m = i;
            c = (&b * &b).mod_floor(p);
            t = (&t * &c).mod_floor(p);
            r = (&r * &b).mod_floor(p);
        }
        Some(self.wrap(r))
    }
}

/// Equality of weighted projective points over the algebraic closure of F_p:
/// same zero pattern and x_i^{w_j} y_j^{w_i} = x_j^{w_i} y_i^{w_j}.
pub fn weighted_equal(x: &[ResidueElement], y: &[ResidueElement], w: &[u32]) -> bool {
    if x.len() != y.len() || x.len() != w.len() {
        return false;
    }
    if x.iter().zip(y).any(|(a, b)| a.is_zero() != b.is_zero()) {
        return false;
    }
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let l = x[i].pow(w[j]).mul(&y[j].pow(w[i]));
            let r = x[j].pow(w[i]).mul(&y[i].pow(w[j]));
            if l != r {
                return false;
            }
        }
    }
    true
}

impl fmt::Display for ResidueElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for ResidueElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.value.to_u64() {
            Some(v) => s.serialize_u64(v),
            None => s.serialize_str(&self.value.to_string()),
        }
    }
}

fn int_val(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (d, r) = n.div_rem(p);
        if !r.is_zero() {
            return k;
        }
        n = d;
        k += 1;
    }
}

/// Exponent of p in x; infinity for x = 0.
pub fn val_p(x: &Q, ctx: &ValuedContext) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinity;
    }
    let v = int_val(x.numer(), ctx.p()) - int_val(x.denom(), ctx.p());
    Valuation::int(v)
}

/// Integer exponent of p in a nonzero x.
pub fn val_int(x: &Q, ctx: &ValuedContext) -> Option<i64> {
    if x.is_zero() {
        None
    } else {
        Some(int_val(x.numer(), ctx.p()) - int_val(x.denom(), ctx.p()))
    }
}

/// Image of x in F_p.
pub fn residue(x: &Q, ctx: &ValuedContext) -> Result<ResidueElement> {
    if val_p(x, ctx).is_negative() {
        return Err(Error::NegativeValuation);
    }
    let p = ctx.p();
    let d = x.denom().mod_floor(p);
    let dinv = d.modpow(&(p - BigInt::from(2)), p);
    Ok(ResidueElement::new(x.numer() * dinv, ctx))
}

/// Canonical weighted shift: e = -min(v_i / w_i) over finite entries, and
/// the shifted valuations v_i + e w_i.
pub fn canonical_shift(entries: &[(Valuation, u32)]) -> Result<(Q, Vec<Valuation>)> {
    let min = entries
        .iter()
        .filter_map(|(v, w)| v.finite().map(|v| v / BigInt::from(*w)))
        .min()
        .ok_or(Error::AllInfinite)?;
    let e = -min;
    let shifted = entries
        .iter()
        .map(|(v, w)| v.shifted(&(&e * BigInt::from(*w))))
        .collect();
    Ok((e, shifted))
}

/// Reduce a weighted projective point with rational coordinates to F_p.
///
/// Coordinates are scaled by p^(e w_i) for the canonical shift e. When e w_i
/// is not an integer the scaled coordinate has positive fractional valuation
/// and reduces to zero.
pub fn weighted_residues(values: &[Q], weights: &[u32], ctx: &ValuedContext) -> Result<(Q, Vec<ResidueElement>)> {
    let entries: Vec<_> = values.iter().zip(weights).map(|(x, w)| (val_p(x, ctx), *w)).collect();
    let (e, _) = canonical_shift(&entries)?;
    let mut out = Vec::with_capacity(values.len());
    for (x, w) in values.iter().zip(weights) {
        let s = &e * BigInt::from(*w);
        if x.is_zero() || !s.is_integer() {
            out.push(ResidueElement::new(0, ctx));
        } else {
            let k = s.to_integer().to_i64().expect("shift fits in i64");
            out.push(residue(&(x * ctx.pow(k)), ctx)?);
        }
    }
    Ok((e, out))
}

/// Odd primes dividing numerator or denominator, with signed exponents.
pub fn odd_bad_primes(x: &Q) -> Result<Vec<(BigInt, i64)>> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut out: Vec<(BigInt, i64)> = Vec::new();
    for (p, e) in factor(x.numer().magnitude()) {
        out.push((BigInt::from(p), e as i64));
    }
    for (p, e) in factor(x.denom().magnitude()) {
        out.push((BigInt::from(p), -(e as i64)));
    }
    out.retain(|(p, _)| *p != BigInt::from(2));
    out.sort();
    Ok(out)
}

/// Merge several factorizations, summing exponents and dropping zeros.
pub fn merge_factorizations(parts: &[Vec<(BigInt, i64)>]) -> Vec<(BigInt, i64)> {
    let mut all: Vec<(BigInt, i64)> = parts.iter().flatten().cloned().collect();
    all.sort();
    let mut out: Vec<(BigInt, i64)> = Vec::new();
    for (p, e) in all {
        match out.last_mut() {
            Some((lp, le)) if *lp == p => *le += e,
            _ => out.push((p, e)),
        }
    }
    out.retain(|(_, e)| *e != 0);
    out
}

const SMALL_PRIMES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Miller-Rabin with the first twelve prime bases; deterministic below 3.3e24.
pub fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &sp in &SMALL_PRIMES {
        let sp = BigUint::from(sp);
        if *n == sp {
            return true;
        }
        if (n % &sp).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'bases: for &a in &SMALL_PRIMES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn rho(n: &BigUint, c: u64) -> Option<BigUint> {
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let mut x = BigUint::from(2u32);
    let mut y = x.clone();
    let mut d = BigUint::one();
    let mut steps = 0u64;
    while d.is_one() {
        x = f(&x);
        y = f(&f(&y));
        let diff = if x > y { &x - &y } else { &y - &x };
        d = diff.gcd(n);
        steps += 1;
        if steps > 1_000_000 {
            return None;
        }
    }
    if d == *n {
        None
    } else {
        Some(d)
    }
}

fn split(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    for c in 1u64.. {
        if let Some(d) = rho(&n, c) {
            let other = &n / &d;
            split(d, out);
            split(other, out);
            return;
        }
    }
}

/// Prime factorisation by trial division followed by Pollard rho.
pub fn factor(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut n = n.clone();
    let mut primes: Vec<BigUint> = Vec::new();
    if n.is_zero() {
        return Vec::new();
    }
    let mut d = 2u32;
    while d < 10_000 {
        let bd = BigUint::from(d);
        if &bd * &bd > n {
            break;
        }
        while (&n % &bd).is_zero() {
            n /= &bd;
            primes.push(bd.clone());
        }
        d += if d == 2 { 1 } else { 2 };
    }
    split(n, &mut primes);
    primes.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((lp, e)) if *lp == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}
