//! Ciani quartics `A x^4 + B y^4 + C z^4 + a y^2 z^2 + b x^2 z^2 + c x^2 y^2`.
//!
//! Coefficients are stored as two triples indexed by variable: `quartic[i]`
//! multiplies the fourth power of variable i, `mixed[i]` multiplies the
//! product of squares of the two other variables. A permutation of the
//! variables therefore permutes both triples the same way.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::valuation::{canonical_shift, q, val_p, Valuation, ValuedContext, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CianiQuartic {
    pub quartic: [Q; 3],
    pub mixed: [Q; 3],
}

impl CianiQuartic {
    /// Coefficients in the order (A, B, C, a, b, c).
    pub fn new(coeffs: [Q; 6]) -> Self {
        let [ca, cb, cc, a, b, c] = coeffs;
        CianiQuartic {
            quartic: [ca, cb, cc],
            mixed: [a, b, c],
        }
    }

    pub fn from_ints(c: [i64; 6]) -> Self {
        Self::new(c.map(q))
    }

    pub fn coeffs(&self) -> [Q; 6] {
        let [ca, cb, cc] = self.quartic.clone();
        let [a, b, c] = self.mixed.clone();
        [ca, cb, cc, a, b, c]
    }

    /// Same curve, rejecting singular models.
    pub fn validated(self) -> Result<Self> {
        if invariants(&self)?.delta_y.is_zero() {
            Err(Error::SingularCurve)
        } else {
            Ok(self)
        }
    }
}

impl fmt::Display for CianiQuartic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coeffs();
        write!(f, "({},{},{},{},{},{})", c[0], c[1], c[2], c[3], c[4], c[5])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuarticInvariants {
    #[serde(serialize_with = "ser_q")]
    pub delta_a: Q,
    #[serde(serialize_with = "ser_q")]
    pub delta_b: Q,
    #[serde(serialize_with = "ser_q")]
    pub delta_c: Q,
    #[serde(serialize_with = "ser_q")]
    pub delta_x: Q,
    #[serde(serialize_with = "ser_q")]
    pub delta_y: Q,
    #[serde(serialize_with = "ser_q")]
    pub i3: Q,
    #[serde(serialize_with = "ser_q")]
    pub i3p: Q,
    #[serde(serialize_with = "ser_q")]
    pub i3pp: Q,
    #[serde(serialize_with = "ser_q")]
    pub i6: Q,
    #[serde(serialize_with = "ser_q")]
    pub iinv: Q,
}

pub(crate) fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl QuarticInvariants {
    /// (I3, I3', I3'', I6, I).
    pub fn five(&self) -> [Q; 5] {
        [
            self.i3.clone(),
            self.i3p.clone(),
            self.i3pp.clone(),
            self.i6.clone(),
            self.iinv.clone(),
        ]
    }

    /// I3'^2 - 16 I3 I3'', the auxiliary quantity in the degenerate-conic table.
    pub fn aux(&self) -> Q {
        &self.i3p * &self.i3p - q(16) * &self.i3 * &self.i3pp
    }
}

pub const INVARIANT_WEIGHTS: [u32; 5] = [3, 3, 3, 6, 6];

fn two_pow_neg20() -> Q {
    Q::new(BigInt::one(), BigInt::from(1u64 << 20))
}

/// (a^2 - 4BC, b^2 - 4AC, c^2 - 4AB).
pub fn deltas(f: &CianiQuartic) -> [Q; 3] {
    let [ca, cb, cc] = &f.quartic;
    let [a, b, c] = &f.mixed;
    let four = q(4);
    [
        a * a - &four * cb * cc,
        b * b - &four * ca * cc,
        c * c - &four * ca * cb,
    ]
}

pub fn invariants(f: &CianiQuartic) -> Result<QuarticInvariants> {
    let [ca, cb, cc] = &f.quartic;
    let [a, b, c] = &f.mixed;
    let [da, db, dc] = deltas(f);
    let i3 = ca * cb * cc;
    let i3p = ca * &da + cb * &db + cc * &dc;
    let i3pp = -q(4) * &i3 + ca * a * a + cb * b * b + cc * c * c - a * b * c;
    let i6 = &da * &db * &dc;
    let iinv = ca * cb * &da * &db + ca * cc * &da * &dc + cb * cc * &db * &dc;

    let relation = q(4) * &iinv + &i6 - &i3p * &i3p + q(16) * &i3 * &i3pp + q(2) * &i3p * &i3pp - &i3pp * &i3pp;
    if !relation.is_zero() {
        return Err(Error::RelationViolated);
    }
    let i3pp2 = &i3pp * &i3pp;
    let delta_y = -two_pow_neg20() * &i3 * &i3pp2 * &i3pp2 * &i6 * &i6;
    let direct = -two_pow_neg20() * ca * cb * cc * (&da * &da) * (&db * &db) * (&dc * &dc) * &i3pp2 * &i3pp2;
    if direct != delta_y {
        return Err(Error::RelationViolated);
    }
    Ok(QuarticInvariants {
        delta_a: da,
        delta_b: db,
        delta_c: dc,
        delta_x: i3pp.clone(),
        delta_y,
        i3,
        i3p,
        i3pp,
        i6,
        iinv,
    })
}

/// Substitution x_i -> scale[i] * x_{perm[i]} followed by multiplying the
/// form by `global`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transform {
    pub perm: [usize; 3],
    pub scale: [Q; 3],
    pub global: Q,
}

impl Transform {
    pub fn identity() -> Self {
        Transform {
            perm: [0, 1, 2],
            scale: [q(1), q(1), q(1)],
            global: q(1),
        }
    }

    pub fn permutation(perm: [usize; 3]) -> Self {
        Transform {
            perm,
            ..Self::identity()
        }
    }

    pub fn diagonal(scale: [Q; 3]) -> Self {
        Transform {
            scale,
            ..Self::identity()
        }
    }
}

pub fn apply_transform(f: &CianiQuartic, t: &Transform) -> CianiQuartic {
    assert!(
        t.scale.iter().all(|s| !s.is_zero()) && !t.global.is_zero(),
        "transform scalars must be nonzero"
    );
    let mut quartic: [Q; 3] = [q(0), q(0), q(0)];
    let mut mixed: [Q; 3] = [q(0), q(0), q(0)];
    let sq: Vec<Q> = t.scale.iter().map(|s| s * s).collect();
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        quartic[t.perm[i]] = &t.global * &sq[i] * &sq[i] * &f.quartic[i];
        mixed[t.perm[i]] = &t.global * &sq[j] * &sq[k] * &f.mixed[i];
    }
    CianiQuartic { quartic, mixed }
}

/// Result of normalising coefficient valuations: the substitution
/// (x, y, z) -> (o_r x, o_s y, o_t z) with valuations `shifts` = (r, s, t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientNormalization {
    pub shifts: [Q; 3],
    pub vals: [Valuation; 6],
}

fn shift_coefficient_vals(vals: &mut [Valuation; 6], d: &[Q; 3]) {
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        vals[i] = vals[i].shifted(&(q(4) * &d[i]));
        vals[3 + i] = vals[3 + i].shifted(&(q(2) * (&d[j] + &d[k])));
    }
}

fn min_finite<'a>(it: impl Iterator<Item = (&'a Valuation, i64)>) -> Option<Q> {
    it.filter_map(|(v, w)| v.finite().map(|v| v / BigInt::from(w))).min()
}

/// Move to a model in which each of the sets {A,B,c}, {A,b,C}, {a,B,C},
/// {A,b,c}, {a,B,c}, {a,b,C} contains a coefficient of valuation 0 and no
/// coefficient has negative valuation. Works on valuations only.
pub fn normalize_coefficient_valuations(vals: &[Valuation; 6]) -> CoefficientNormalization {
    let mut vals = vals.clone();
    let mut total = [q(0), q(0), q(0)];
    let mut apply = |vals: &mut [Valuation; 6], d: [Q; 3]| {
        shift_coefficient_vals(vals, &d);
        for i in 0..3 {
            total[i] += &d[i];
        }
    };

    if let Some(m) = min_finite(vals.iter().map(|v| (v, 1))) {
        if m < q(0) {
            let u = -m / BigInt::from(4);
            apply(&mut vals, [u.clone(), u.clone(), u]);
        }
    }

    for _ in 0..256 {
        let mut moved = false;
        // {A, b, c} and its images: scale variable i down.
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let set = [&vals[i], &vals[3 + j], &vals[3 + k]];
            if set.iter().all(|v| v.is_positive()) {
                let m = min_finite([(set[0], 4), (set[1], 2), (set[2], 2)].into_iter())
                    .expect("quartic coefficients are nonzero");
                let mut d = [q(0), q(0), q(0)];
                d[i] = -m;
                apply(&mut vals, d);
                moved = true;
                break;
            }
        }
        if moved {
            continue;
        }
        // {A, B, c} and its images: scale two variables down, the third up.
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let set = [&vals[j], &vals[k], &vals[3 + i]];
            if set.iter().all(|v| v.is_positive()) {
                let m = min_finite(set.iter().map(|v| (*v, 4))).expect("quartic coefficients are nonzero");
                let mut d = [q(0), q(0), q(0)];
                d[j] = -m.clone();
                d[k] = -m.clone();
                d[i] = m;
                apply(&mut vals, d);
                moved = true;
                break;
            }
        }
        if !moved {
            return CoefficientNormalization { shifts: total, vals };
        }
    }
    unreachable!("coefficient normalisation did not terminate")
}

/// Valuations of (A, B, C, a, b, c).
pub fn coefficient_valuations(f: &CianiQuartic, ctx: &ValuedContext) -> [Valuation; 6] {
    f.coeffs().map(|c| val_p(&c, ctx))
}

/// Canonically normalised valuations of (I3, I3', I3'', I6, I).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValuationProfile {
    pub nu_i3: Valuation,
    pub nu_i3p: Valuation,
    pub nu_i3pp: Valuation,
    pub nu_i6: Valuation,
    pub nu_i: Valuation,
    /// Normalised valuation of I3'^2 - 16 I3 I3'' (weight 6).
    pub nu_aux: Valuation,
    #[serde(serialize_with = "ser_q")]
    pub shift: Q,
    pub raw: [Valuation; 5],
    #[serde(serialize_with = "ser_p")]
    pub p: BigInt,
}

fn ser_p<S: serde::Serializer>(p: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

impl ValuationProfile {
    pub fn normalized(&self) -> [Valuation; 5] {
        [
            self.nu_i3.clone(),
            self.nu_i3p.clone(),
            self.nu_i3pp.clone(),
            self.nu_i6.clone(),
            self.nu_i.clone(),
        ]
    }

    /// Build a profile from already-normalised valuations; for table tests.
    pub fn from_normalized(nu: [Valuation; 5], nu_aux: Valuation, p: BigInt) -> Self {
        let [nu_i3, nu_i3p, nu_i3pp, nu_i6, nu_i] = nu.clone();
        ValuationProfile {
            nu_i3,
            nu_i3p,
            nu_i3pp,
            nu_i6,
            nu_i,
            nu_aux,
            shift: Q::zero(),
            raw: nu,
            p,
        }
    }
}

impl fmt::Display for ValuationProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(nu I3, I3', I3'', I6, I) = ({}, {}, {}, {}, {}) at p = {}",
            self.nu_i3, self.nu_i3p, self.nu_i3pp, self.nu_i6, self.nu_i, self.p
        )
    }
}

pub fn valuation_profile(f: &CianiQuartic, ctx: &ValuedContext) -> Result<ValuationProfile> {
    let inv = invariants(f)?;
    profile_of(&inv, ctx)
}

pub fn profile_of(inv: &QuarticInvariants, ctx: &ValuedContext) -> Result<ValuationProfile> {
    if inv.delta_y.is_zero() {
        return Err(Error::SingularCurve);
    }
    let raw = inv.five().map(|x| val_p(&x, ctx));
    let entries: Vec<_> = raw.iter().cloned().zip(INVARIANT_WEIGHTS).collect();
    let (shift, s) = canonical_shift(&entries)?;
    let nu_aux = val_p(&inv.aux(), ctx).shifted(&(&shift * BigInt::from(6)));
    Ok(ValuationProfile {
        nu_i3: s[0].clone(),
        nu_i3p: s[1].clone(),
        nu_i3pp: s[2].clone(),
        nu_i6: s[3].clone(),
        nu_i: s[4].clone(),
        nu_aux,
        shift,
        raw,
        p: ctx.p().clone(),
    })
}
