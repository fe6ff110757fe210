//! Hyperelliptic Ciani curves y^2 = x^8 + M x^6 + N x^4 + M x^2 + 1.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::classifier::{
    select, CaseMatch, ClassificationResult, ComponentInvariantReport, Profile, ReductionKind, ReductionType, Row,
};
use crate::error::{Error, Result};
use crate::graphs::DecoratedGraphType as G;
use crate::quartic::ser_q;
use crate::valuation::{canonical_shift, q, residue, val_p, ResidueElement, Valuation, ValuedContext, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypCianiModel {
    pub m: Q,
    pub n: Q,
}

impl HypCianiModel {
    pub fn new(m: Q, n: Q) -> Self {
        HypCianiModel { m, n }
    }

    pub fn from_ints(m: i64, n: i64) -> Self {
        HypCianiModel::new(q(m), q(n))
    }

    /// Discriminant 2^4 L2^4 L3^2.
    pub fn discriminant(&self) -> Q {
        let [_, l2, l3] = l_invariants(self);
        q(16) * l2.pow(4) * &l3 * &l3
    }

    pub fn validated(self) -> Result<Self> {
        if self.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(self)
    }
}

impl fmt::Display for HypCianiModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(M, N) = ({}, {})", self.m, self.n)
    }
}

/// (L1, L2, L3) = (N + 10, M^2 - 4N + 8, (2M + N + 2)(2M - N - 2)).
pub fn l_invariants(h: &HypCianiModel) -> [Q; 3] {
    let (m, n) = (&h.m, &h.n);
    [
        n + q(10),
        m * m - q(4) * n + q(8),
        (q(2) * m + n + q(2)) * (q(2) * m - n - q(2)),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypProfile {
    pub nu_l1: Valuation,
    pub nu_l2: Valuation,
    pub nu_l3: Valuation,
    /// Normalised valuation of L1^2 - 4 L2.
    pub nu_disc: Valuation,
    #[serde(serialize_with = "ser_q")]
    pub shift: Q,
}

impl HypProfile {
    /// Normalise raw valuations of (L1, L2, L3) with weights (1, 2, 3).
    pub fn from_raw(raw: [Valuation; 3], disc: Valuation) -> Result<Self> {
        let entries: Vec<_> = raw.into_iter().zip([1, 2, 3]).collect();
        let (shift, s) = canonical_shift(&entries)?;
        Ok(HypProfile {
            nu_l1: s[0].clone(),
            nu_l2: s[1].clone(),
            nu_l3: s[2].clone(),
            nu_disc: disc.shifted(&(q(2) * &shift)),
            shift,
        })
    }

    pub fn normalized(&self) -> [Valuation; 3] {
        [self.nu_l1.clone(), self.nu_l2.clone(), self.nu_l3.clone()]
    }
}

impl fmt::Display for HypProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(nu L1, L2, L3) = ({}, {}, {}), nu(L1^2 - 4L2) = {}",
            self.nu_l1, self.nu_l2, self.nu_l3, self.nu_disc
        )
    }
}

pub fn hyp_profile(l: &[Q; 3], ctx: &ValuedContext) -> Result<HypProfile> {
    if l[1].is_zero() || l[2].is_zero() {
        return Err(Error::SingularCurve);
    }
    let disc = &l[0] * &l[0] - q(4) * &l[1];
    HypProfile::from_raw(l.clone().map(|x| val_p(&x, ctx)), val_p(&disc, ctx))
}

fn z(v: &Valuation) -> bool {
    v.is_zero()
}

fn pos(v: &Valuation) -> bool {
    v.is_positive()
}

fn table3() -> Vec<Row<HypProfile>> {
    vec![
        Row {
            id: "T3.a",
            pred: |h| z(&h.nu_l2) && pos(&h.nu_l3) && z(&h.nu_disc),
            graph: G::II3,
        },
        Row {
            id: "T3.b",
            pred: |h| z(&h.nu_l1) && z(&h.nu_l2) && pos(&h.nu_l3) && pos(&h.nu_disc),
            graph: G::III1,
        },
        Row {
            id: "T3.c",
            pred: |h| pos(&h.nu_l2) && z(&h.nu_l3),
            graph: G::II2,
        },
        Row {
            id: "T3.d.i",
            pred: |h| d_case(h) && &h.nu_l2 + &h.nu_l1 < h.nu_l3,
            graph: G::IVs2,
        },
        Row {
            id: "T3.d.ii",
            pred: |h| d_case(h) && &h.nu_l2 + &h.nu_l1 > h.nu_l3,
            graph: G::IV5,
        },
        Row {
            id: "T3.d.iii",
            pred: |h| d_case(h) && &h.nu_l2 + &h.nu_l1 == h.nu_l3,
            graph: G::III4,
        },
    ]
}

fn d_case(h: &HypProfile) -> bool {
    z(&h.nu_l1) && pos(&h.nu_l2) && pos(&h.nu_l3)
}

/// Potentially good iff nu(L1^2/L2) >= 0 and nu(L2^3/L3^2) = 0.
pub fn is_potentially_good(h: &HypProfile) -> bool {
    h.nu_l1.times(2) >= h.nu_l2 && h.nu_l2.times(3) == h.nu_l3.times(2)
}

pub fn classify_hyp_case(h: &HypProfile) -> Result<CaseMatch> {
    if is_potentially_good(h) {
        return Ok(CaseMatch {
            case_id: "GOOD",
            reduction_type: ReductionType::new(ReductionKind::GoodHyperelliptic, true),
            graph: G::I,
        });
    }
    let rows = table3();
    let row = select(&rows, h)?.ok_or_else(|| Error::UnmatchedHypProfile(Box::new(h.clone())))?;
    Ok(CaseMatch::from_graph(row.id, row.graph, true))
}

/// j = 2^4 (12 L2 + L1^2)^3 / ((4 L2 - L1^2)^2 L2), weight zero in L.
pub fn loop_j_from_l(l: &[Q; 3], ctx: &ValuedContext) -> Result<ResidueElement> {
    let (l1, l2) = (&l[0], &l[1]);
    let s = q(12) * l2 + l1 * l1;
    let d = q(4) * l2 - l1 * l1;
    if d.is_zero() {
        return Err(Error::NegativeValuation);
    }
    residue(&(q(16) * &s * &s * &s / (&d * &d * l2)), ctx)
}

pub fn hyp_j_residues(l: &[Q; 3], case_id: &str, ctx: &ValuedContext) -> Result<ComponentInvariantReport> {
    Ok(match case_id {
        "T3.a" => ComponentInvariantReport::JInvariant {
            j: loop_j_from_l(l, ctx)?,
        },
        "T3.d.iii" => ComponentInvariantReport::Const1728 {
            j: ResidueElement::new(1728, ctx),
        },
        _ => ComponentInvariantReport::None,
    })
}

pub fn classify_hyp_invariants(l: &[Q; 3], ctx: &ValuedContext) -> Result<ClassificationResult> {
    let h = hyp_profile(l, ctx)?;
    let m = classify_hyp_case(&h)?;
    let components = hyp_j_residues(l, m.case_id, ctx)?;
    Ok(ClassificationResult {
        case_id: m.case_id.to_string(),
        reduction_type: m.reduction_type,
        graph: m.graph,
        components,
        profile: Profile::Hyperelliptic(h),
    })
}

pub fn classify_hyp(h: &HypCianiModel, ctx: &ValuedContext) -> Result<ClassificationResult> {
    classify_hyp_invariants(&l_invariants(h), ctx)
}

/// The six parameter pairs describing the same curve.
pub fn hyp_transform_orbit(h: &HypCianiModel) -> Result<Vec<HypCianiModel>> {
    let (m, n) = (&h.m, &h.n);
    let dp = q(2) * m + n + q(2);
    let dm = -q(2) * m + n + q(2);
    if dp.is_zero() || dm.is_zero() {
        return Err(Error::DegenerateOrbit);
    }
    let m1 = (q(8) * m - q(4) * n + q(56)) / &dp;
    let n1 = (q(-20) * m + q(6) * n + q(140)) / &dp;
    let m2 = (q(-8) * m - q(4) * n + q(56)) / &dm;
    let n2 = (q(20) * m + q(6) * n + q(140)) / &dm;
    Ok(vec![
        h.clone(),
        HypCianiModel::new(-m, n.clone()),
        HypCianiModel::new(m1.clone(), n1.clone()),
        HypCianiModel::new(-m1, n1),
        HypCianiModel::new(m2.clone(), n2.clone()),
        HypCianiModel::new(-m2, n2),
    ])
}
