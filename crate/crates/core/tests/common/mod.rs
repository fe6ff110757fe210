//! Test-only oracles computed without the library's formulas, plus random
//! curve generators.
#![allow(dead_code)]

use ciani::quartic::{invariants, CianiQuartic, Transform};
use ciani::valuation::{q, Q};
use num_traits::Zero;
use rand::Rng;

/// Binary form sum c[i] x^(m-i) y^i of degree m = c.len() - 1.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryForm(pub Vec<Q>);

fn factorial(n: usize) -> Q {
    (1..=n).fold(q(1), |acc, k| acc * q(k as i64))
}

fn binomial(n: usize, k: usize) -> Q {
    factorial(n) / (factorial(k) * factorial(n - k))
}

impl BinaryForm {
    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    /// d^i/dx^i d^j/dy^j.
    fn derivative(&self, i: usize, j: usize) -> BinaryForm {
        let m = self.degree();
        let mut out = vec![q(0); m + 1 - i - j];
        for (k, c) in self.0.iter().enumerate() {
            let (ex, ey) = (m - k, k);
            if ex < i || ey < j {
                continue;
            }
            let f = factorial(ex) / factorial(ex - i) * factorial(ey) / factorial(ey - j);
            out[ey - j] += c * f;
        }
        BinaryForm(out)
    }

    fn mul(&self, o: &BinaryForm) -> BinaryForm {
        let mut out = vec![q(0); self.degree() + o.degree() + 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        BinaryForm(out)
    }

    /// Normalised transvectant (f, g)_h.
    pub fn transvectant(&self, g: &BinaryForm, h: usize) -> BinaryForm {
        let (m, n) = (self.degree(), g.degree());
        let mut acc = vec![q(0); m + n - 2 * h + 1];
        for k in 0..=h {
            let term = self.derivative(h - k, k).mul(&g.derivative(k, h - k));
            let sign = if k % 2 == 0 { q(1) } else { q(-1) };
            for (a, t) in acc.iter_mut().zip(term.0) {
                *a += &sign * binomial(h, k) * t;
            }
        }
        let norm = factorial(m - h) * factorial(n - h) / (factorial(m) * factorial(n));
        BinaryForm(acc.into_iter().map(|x| x * &norm).collect())
    }

    fn constant(&self) -> Q {
        assert_eq!(self.degree(), 0);
        self.0[0].clone()
    }
}

#[allow(clippy::needless_range_loop)]
fn det(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut d = q(1);
    for c in 0..n {
        let Some(r) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return q(0);
        };
        if r != c {
            m.swap(r, c);
            d = -d;
        }
        let piv = m[c][c].clone();
        d *= &piv;
        for r in c + 1..n {
            let f = &m[r][c] / &piv;
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] -= t;
            }
        }
    }
    d
}

/// Discriminant a0^(2n-2) prod (r_i - r_j)^2 of a form with a0 != 0, via the
/// Sylvester resultant of f(x, 1) and f'(x, 1).
pub fn discriminant(f: &BinaryForm) -> Q {
    let n = f.degree();
    let a: Vec<Q> = f.0.clone();
    let da: Vec<Q> = (0..n).map(|i| &a[i] * q((n - i) as i64)).collect();
    let size = 2 * n - 1;
    let mut m = vec![vec![q(0); size]; size];
    for r in 0..n - 1 {
        for (k, c) in a.iter().enumerate() {
            m[r][r + k] = c.clone();
        }
    }
    for r in 0..n {
        for (k, c) in da.iter().enumerate() {
            m[n - 1 + r][r + k] = c.clone();
        }
    }
    let sign = if (n * (n - 1) / 2).is_multiple_of(2) { q(1) } else { q(-1) };
    sign * det(m) / &a[0]
}

/// Standard Igusa invariants (J2, J4, J6, J8, J10) of y^2 = f for a sextic f,
/// from Clebsch transvectant invariants.
pub fn igusa_j(f: &BinaryForm) -> [Q; 5] {
    assert_eq!(f.degree(), 6);
    let i = f.transvectant(f, 4);
    let delta = i.transvectant(&i, 2);
    let a = f.transvectant(f, 6).constant();
    let b = i.transvectant(&i, 4).constant();
    let c = i.transvectant(&delta, 4).constant();
    let i2 = q(-120) * &a;
    let i4 = q(-720) * &a * &a + q(6750) * &b;
    let i6 = q(8640) * &a * &a * &a - q(108000) * &a * &b + q(202500) * &c;
    let i10 = discriminant(f);
    let j2 = &i2 / q(8);
    let j4 = (q(4) * &j2 * &j2 - &i4) / q(96);
    let j6 = (q(8) * &j2 * &j2 * &j2 - q(160) * &j2 * &j4 - &i6) / q(576);
    let j8 = (&j2 * &j6 - &j4 * &j4) / q(4);
    let j10 = i10 / q(4096);
    [j2, j4, j6, j8, j10]
}

/// j-invariant of w^2 = a x^4 + b x^3 + c x^2 + d x + e from its quartic
/// invariants I and J.
pub fn quartic_j(co: [Q; 5]) -> Option<Q> {
    let [a, b, c, d, e] = co;
    let i = q(12) * &a * &e - q(3) * &b * &d + &c * &c;
    let j =
        q(72) * &a * &c * &e + q(9) * &b * &c * &d - q(27) * &a * &d * &d - q(27) * &e * &b * &b - q(2) * &c * &c * &c;
    let den = q(4) * &i * &i * &i - &j * &j;
    (!den.is_zero()).then(|| q(6912) * &i * &i * &i / den)
}

pub fn random_unit_free(rng: &mut impl Rng, lo: i64, hi: i64) -> i64 {
    loop {
        let v = rng.gen_range(lo..=hi);
        if v != 0 {
            return v;
        }
    }
}

/// Smooth quartic with nonzero integer coefficients in [-bound, bound].
pub fn random_smooth_quartic(rng: &mut impl Rng, bound: i64) -> CianiQuartic {
    loop {
        let c: [i64; 6] = std::array::from_fn(|_| rng.gen_range(-bound..=bound));
        let f = CianiQuartic::from_ints(c);
        if let Ok(inv) = invariants(&f) {
            if !inv.delta_y.is_zero() {
                return f;
            }
        }
    }
}

pub fn random_rational(rng: &mut impl Rng, primes: &[i64]) -> Q {
    let mut x = q(random_unit_free(rng, -9, 9));
    for &p in primes {
        let e = rng.gen_range(-2..=2);
        if e >= 0 {
            x *= q(p.pow(e as u32));
        } else {
            x /= q(p.pow((-e) as u32));
        }
    }
    x
}

/// Random coordinate permutation, diagonal scaling and global scaling.
pub fn random_transform(rng: &mut impl Rng, primes: &[i64]) -> Transform {
    let mut perm = [0usize, 1, 2];
    for i in (1..3).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let scale = std::array::from_fn(|_| random_rational(rng, primes));
    Transform {
        perm,
        scale,
        global: random_rational(rng, primes),
    }
}

pub fn odd_primes_of(x: &Q) -> Vec<i64> {
    ciani::valuation::odd_bad_primes(x)
        .unwrap()
        .into_iter()
        .map(|(p, _)| i64::try_from(p).unwrap())
        .collect()
}
