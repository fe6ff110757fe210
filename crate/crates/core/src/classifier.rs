//! Classification of Ciani quartics from the valuations of their invariants,
//! with residue-field invariants of the positive-genus components.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{DecoratedGraphType, StableType};
use crate::hyperelliptic::{self, HypProfile};
use crate::quartic::{
    coefficient_valuations, deltas, invariants, normalize_coefficient_valuations, profile_of, CianiQuartic,
    QuarticInvariants, ValuationProfile,
};
use crate::valuation::{
    q, residue, val_int, val_p, weighted_equal, weighted_residues, ResidueElement, Valuation, ValuedContext, Q,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ReductionKind {
    GoodQuartic,
    GoodHyperelliptic,
    Loop,
    Lop,
    Looop,
    DNA,
    Candy,
    Tree,
    WinkyCat,
    Cave,
    GrlPwr,
    Garden,
    Cat,
    Braid,
}

impl ReductionKind {
    pub fn from_stable(t: StableType) -> Self {
        match t {
            StableType::Good => ReductionKind::GoodQuartic,
            StableType::Candy => ReductionKind::Candy,
            StableType::DNA => ReductionKind::DNA,
            StableType::Loop => ReductionKind::Loop,
            StableType::Lop => ReductionKind::Lop,
            StableType::Looop => ReductionKind::Looop,
            StableType::Cave => ReductionKind::Cave,
            StableType::WinkyCat => ReductionKind::WinkyCat,
            StableType::Tree => ReductionKind::Tree,
            StableType::GrlPwr => ReductionKind::GrlPwr,
            StableType::Garden => ReductionKind::Garden,
            StableType::Braid => ReductionKind::Braid,
            StableType::Cat => ReductionKind::Cat,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ReductionKind::GoodQuartic => "Good (quartic)",
            ReductionKind::GoodHyperelliptic => "Good (hyperelliptic)",
            ReductionKind::Loop => "Loop",
            ReductionKind::Lop => "Lop",
            ReductionKind::Looop => "Looop",
            ReductionKind::DNA => "DNA",
            ReductionKind::Candy => "Candy",
            ReductionKind::Tree => "Tree",
            ReductionKind::WinkyCat => "Winky Cat",
            ReductionKind::Cave => "Cave",
            ReductionKind::GrlPwr => "Grl Pwr",
            ReductionKind::Garden => "Garden",
            ReductionKind::Cat => "Cat",
            ReductionKind::Braid => "Braid",
        }
    }

    pub fn is_good(self) -> bool {
        matches!(self, ReductionKind::GoodQuartic | ReductionKind::GoodHyperelliptic)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ReductionType {
    pub kind: ReductionKind,
    /// The special fibre is the reduction of a hyperelliptic curve.
    pub hyperelliptic_reduction: bool,
}

impl ReductionType {
    pub fn new(kind: ReductionKind, hyperelliptic_reduction: bool) -> Self {
        ReductionType {
            kind,
            hyperelliptic_reduction,
        }
    }
}

impl fmt::Display for ReductionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        if self.hyperelliptic_reduction && !self.kind.is_good() {
            f.write_str(" (hyp)")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum ComponentInvariantReport {
    None,
    JInvariant {
        j: ResidueElement,
    },
    JPair {
        /// Coefficients in ascending degree, scaled to be monic.
        polynomial: Vec<ResidueElement>,
        degenerate: bool,
        /// Roots in F_p, sorted; empty when the quadratic does not split.
        roots: Vec<ResidueElement>,
    },
    IgusaTuple {
        /// (J2, J4, J6, J8, J10), a point with weights (1, 2, 3, 4, 5).
        j: Vec<ResidueElement>,
        j2_5_over_j10: Option<ResidueElement>,
    },
    Const1728 {
        j: ResidueElement,
    },
    HypInvariantPoint {
        /// (L1, L2, L3), a point with weights (1, 2, 3).
        l: Vec<ResidueElement>,
    },
}

impl ComponentInvariantReport {
    /// Equality, with weighted-projective points compared up to scaling.
    pub fn equivalent(&self, other: &Self) -> bool {
        use ComponentInvariantReport as R;
        match (self, other) {
            (R::IgusaTuple { j: a, j2_5_over_j10: x }, R::IgusaTuple { j: b, j2_5_over_j10: y }) => {
                x == y && weighted_equal(a, b, &[1, 2, 3, 4, 5])
            }
            (R::HypInvariantPoint { l: a }, R::HypInvariantPoint { l: b }) => weighted_equal(a, b, &[1, 2, 3]),
            _ => self == other,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
#[allow(clippy::large_enum_variant)]
pub enum Profile {
    Quartic(ValuationProfile),
    Hyperelliptic(HypProfile),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationResult {
    pub case_id: String,
    pub reduction_type: ReductionType,
    pub graph: DecoratedGraphType,
    pub components: ComponentInvariantReport,
    pub profile: Profile,
}

impl ClassificationResult {
    /// Same case, type, graph and component invariants.
    pub fn same_outcome(&self, other: &Self) -> bool {
        self.case_id == other.case_id
            && self.reduction_type == other.reduction_type
            && self.graph == other.graph
            && self.components.equivalent(&other.components)
    }
}

/// Outcome of matching a profile against the tables, before component
/// invariants are attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseMatch {
    pub case_id: &'static str,
    pub reduction_type: ReductionType,
    pub graph: DecoratedGraphType,
}

impl CaseMatch {
    pub(crate) fn from_graph(case_id: &'static str, graph: DecoratedGraphType, hyp: bool) -> Self {
        CaseMatch {
            case_id,
            reduction_type: ReductionType::new(ReductionKind::from_stable(graph.stable_type()), hyp),
            graph,
        }
    }
}

type Pred<P> = fn(&P) -> bool;

pub(crate) struct Row<P> {
    pub id: &'static str,
    pub pred: Pred<P>,
    pub graph: DecoratedGraphType,
}

/// First matching row. Every row is evaluated; rows with different graphs
/// matching together raise `MultiMatch`.
pub(crate) fn select<'a, P>(rows: &'a [Row<P>], p: &P) -> Result<Option<&'a Row<P>>> {
    let hits: Vec<&Row<P>> = rows.iter().filter(|r| (r.pred)(p)).collect();
    if let Some(first) = hits.first() {
        if hits.iter().any(|r| r.graph != first.graph) {
            return Err(Error::MultiMatch(hits.iter().map(|r| r.id.to_string()).collect()));
        }
        return Ok(Some(first));
    }
    Ok(None)
}

/// Normalised valuations as plain fields, for the table predicates.
struct V {
    i3: Valuation,
    i3p: Valuation,
    i3pp: Valuation,
    i6: Valuation,
    i: Valuation,
    aux: Valuation,
}

fn z(v: &Valuation) -> bool {
    v.is_zero()
}

fn pos(v: &Valuation) -> bool {
    v.is_positive()
}

fn k(n: u32, v: &Valuation) -> Valuation {
    v.times(n)
}

use DecoratedGraphType as G;

fn table1() -> Vec<Row<V>> {
    vec![
        Row {
            id: "T1.a",
            pred: |v| z(&v.i3) && pos(&v.i6) && z(&v.i),
            graph: G::II3,
        },
        Row {
            id: "T1.b",
            pred: |v| z(&v.i3) && z(&v.i3p) && pos(&v.i6) && pos(&v.i),
            graph: G::III1,
        },
        Row {
            id: "T1.c",
            pred: |v| z(&v.i3) && pos(&v.i3p) && pos(&v.i6) && pos(&v.i),
            graph: G::IVs1,
        },
        Row {
            id: "T1.d",
            pred: |v| pos(&v.i3) && z(&v.i6) && z(&v.i),
            graph: G::II4,
        },
        Row {
            id: "T1.e",
            pred: |v| pos(&v.i3) && z(&v.i3p) && pos(&v.i6) && z(&v.i),
            graph: G::III2,
        },
        Row {
            id: "T1.f.i",
            pred: |v| f_case(v) && f_i(v),
            graph: G::IV1,
        },
        Row {
            id: "T1.f.ii",
            pred: |v| f_case(v) && f_ii(v),
            graph: G::IV3,
        },
        Row {
            id: "T1.f.iii",
            pred: |v| f_case(v) && f_iii(v),
            graph: G::II1,
        },
        Row {
            id: "T1.f.iv",
            pred: |v| f_case(v) && v.i < v.i3 && v.i < v.i6,
            graph: G::IV2,
        },
        Row {
            id: "T1.f.v",
            pred: |v| f_case(v) && v.i == v.i3 && v.i3 < v.i6,
            graph: G::III5,
        },
        Row {
            id: "T1.f.vi",
            pred: |v| f_case(v) && v.i == v.i6 && v.i6 < v.i3,
            graph: G::III6,
        },
        Row {
            id: "T1.g",
            pred: |v| pos(&v.i3) && z(&v.i3p) && z(&v.i6) && pos(&v.i),
            graph: G::III3,
        },
        Row {
            id: "T1.h",
            pred: |v| pos(&v.i3) && pos(&v.i3p) && z(&v.i6) && pos(&v.i),
            graph: G::IVs3,
        },
    ]
}

fn f_case(v: &V) -> bool {
    pos(&v.i3) && z(&v.i3p) && pos(&v.i6) && pos(&v.i)
}

fn f_i(v: &V) -> bool {
    let s = &v.i3 + &v.i6;
    (k(2, &v.i) > s && s > k(2, &v.i3)) || (v.i3 < v.i && v.i < v.i6)
}

fn f_ii(v: &V) -> bool {
    let s = &v.i3 + &v.i6;
    (k(2, &v.i) > s && s > k(2, &v.i6)) || (v.i3 > v.i && v.i > v.i6)
}

fn f_iii(v: &V) -> bool {
    let s = &v.i3 + &v.i6;
    (k(2, &v.i) > s && s == k(2, &v.i3)) || (v.i3 == v.i && v.i == v.i6)
}

fn table2() -> Vec<Row<V>> {
    vec![
        Row {
            id: "T2.a",
            pred: |v| z(&v.i3) && z(&v.i6),
            graph: G::II2,
        },
        Row {
            id: "T2.b.i",
            pred: |v| b_case(v) && v.i3pp < v.i6,
            graph: G::IVs2,
        },
        Row {
            id: "T2.b.ii",
            pred: |v| b_case(v) && v.i3pp > v.i6,
            graph: G::IV5,
        },
        Row {
            id: "T2.b.iii",
            pred: |v| b_case(v) && v.i3pp == v.i6,
            graph: G::III4,
        },
        Row {
            id: "T2.c.i",
            pred: |v| c_case(v) && c_i(v),
            graph: G::I,
        },
        Row {
            id: "T2.c.ii",
            pred: |v| c_case(v) && c_ii(v),
            graph: G::II3,
        },
        Row {
            id: "T2.c.iii",
            pred: |v| c_case(v) && c_iii(v),
            graph: G::III1,
        },
        Row {
            id: "T2.c.iv",
            pred: |v| c_case(v) && c_iv(v),
            graph: G::II2,
        },
        Row {
            id: "T2.c.v",
            pred: |v| c_case(v) && c_v(v),
            graph: G::IVs2,
        },
        Row {
            id: "T2.c.vi",
            pred: |v| c_case(v) && c_vi(v),
            graph: G::IV5,
        },
        Row {
            id: "T2.c.vii",
            pred: |v| c_case(v) && c_vii(v),
            graph: G::III4,
        },
        Row {
            id: "T2.d",
            pred: |v| pos(&v.i3) && z(&v.i6) && z(&v.i),
            graph: G::III7,
        },
        Row {
            id: "T2.e",
            pred: |v| pos(&v.i3) && z(&v.i3p) && pos(&v.i),
            graph: G::IV4,
        },
    ]
}

fn b_case(v: &V) -> bool {
    pos(&v.i6) && z(&v.i)
}

fn c_case(v: &V) -> bool {
    z(&v.i3) && pos(&v.i3p) && pos(&v.i6) && pos(&v.i)
}

fn c_i(v: &V) -> bool {
    k(2, &v.i6) == k(3, &v.i3pp) && k(3, &v.i3pp) <= k(6, &v.i3p)
}

fn c_ii(v: &V) -> bool {
    k(2, &v.i6) > k(3, &v.i3pp) && k(2, &v.i3p) >= v.i3pp && v.i3pp == v.aux
}

fn c_iii(v: &V) -> bool {
    k(2, &v.i6) > k(3, &v.i3pp) && k(2, &v.i3p) == v.i3pp && v.i3pp < v.aux
}

fn c_iv(v: &V) -> bool {
    k(2, &v.i6) < k(3, &v.i3pp) && k(3, &v.i3p) >= v.i6
}

fn c_v(v: &V) -> bool {
    let s = &v.i3p + &v.i3pp;
    k(3, &v.i3p) < s && s < v.i6
}

fn c_vi(v: &V) -> bool {
    let s = &v.i3p + &v.i3pp;
    k(3, &v.i3p) < v.i6 && v.i6 < s
}

fn c_vii(v: &V) -> bool {
    let s = &v.i3p + &v.i3pp;
    k(3, &v.i3p) < s && s == v.i6
}

fn fields(p: &ValuationProfile) -> V {
    V {
        i3: p.nu_i3.clone(),
        i3p: p.nu_i3p.clone(),
        i3pp: p.nu_i3pp.clone(),
        i6: p.nu_i6.clone(),
        i: p.nu_i.clone(),
        aux: p.nu_aux.clone(),
    }
}

/// Valuation profile of the handoff point (2I3', 16 I3 I3'', -4 I6 I3),
/// computed from the quartic profile alone.
pub fn handoff_profile(p: &ValuationProfile) -> Result<HypProfile> {
    HypProfile::from_raw(
        [p.nu_i3p.clone(), &p.nu_i3 + &p.nu_i3pp, &p.nu_i6 + &p.nu_i3],
        p.nu_aux.clone(),
    )
}

fn handoff_case(case_id: &str) -> &'static str {
    match case_id {
        "T2.c.i" => "GOOD",
        "T2.c.ii" => "T3.a",
        "T2.c.iii" => "T3.b",
        "T2.c.iv" => "T3.c",
        "T2.c.v" => "T3.d.i",
        "T2.c.vi" => "T3.d.ii",
        "T2.c.vii" => "T3.d.iii",
        _ => "",
    }
}

/// Match a normalised profile against the good-reduction criterion and
/// Tables 1 and 2.
pub fn classify_case(p: &ValuationProfile) -> Result<CaseMatch> {
    let v = fields(p);
    if z(&v.i3) && z(&v.i3pp) && z(&v.i6) {
        return Ok(CaseMatch::from_graph("GOOD", G::I, false));
    }
    let rows = if z(&v.i3pp) { table1() } else { table2() };
    let row = select(&rows, &v)?.ok_or_else(|| Error::UnmatchedProfile(Box::new(p.clone())))?;
    if row.id.starts_with("T2.c") {
        let hyp = hyperelliptic::classify_hyp_case(&handoff_profile(p)?)?;
        if hyp.case_id != handoff_case(row.id) {
            return Err(Error::Inconsistent(format!(
                "{} hands off to {} instead of {}",
                row.id,
                hyp.case_id,
                handoff_case(row.id)
            )));
        }
        if row.id == "T2.c.i" {
            return Ok(CaseMatch {
                case_id: row.id,
                reduction_type: ReductionType::new(ReductionKind::GoodHyperelliptic, true),
                graph: G::I,
            });
        }
        return Ok(CaseMatch::from_graph(row.id, row.graph, true));
    }
    Ok(CaseMatch::from_graph(row.id, row.graph, false))
}

/// Classify from a profile alone; component invariants are left empty.
pub fn classify(p: &ValuationProfile) -> Result<ClassificationResult> {
    let m = classify_case(p)?;
    Ok(ClassificationResult {
        case_id: m.case_id.to_string(),
        reduction_type: m.reduction_type,
        graph: m.graph,
        components: ComponentInvariantReport::None,
        profile: Profile::Quartic(p.clone()),
    })
}

fn res(x: &Q, ctx: &ValuedContext) -> Result<ResidueElement> {
    residue(x, ctx)
}

fn cube(x: &Q) -> Q {
    x * x * x
}

pub fn loop_j_t1a(inv: &QuarticInvariants, ctx: &ValuedContext) -> Result<ResidueElement> {
    let (i3, i3pp, i) = (&inv.i3, &inv.i3pp, &inv.iinv);
    let num = q(16) * cube(&(q(16) * i3 * i3pp + i));
    res(&(num / (i3 * i3pp * i * i)), ctx)
}

pub fn tree_j_t1fv(inv: &QuarticInvariants, ctx: &ValuedContext) -> Result<ResidueElement> {
    let (i3, i3p, i) = (&inv.i3, &inv.i3p, &inv.iinv);
    let num = q(16) * cube(&(i + q(16) * i3 * i3p));
    res(&(num / (i * i * i3 * i3p)), ctx)
}

pub fn winkycat_j_t1fvi(inv: &QuarticInvariants, ctx: &ValuedContext) -> Result<ResidueElement> {
    let (i6, i) = (&inv.i6, &inv.iinv);
    let num = q(16) * cube(&(i6 + q(16) * i));
    res(&(num / (i6 * i6 * i)), ctx)
}

pub fn loop_j_t1g(inv: &QuarticInvariants, ctx: &ValuedContext) -> Result<ResidueElement> {
    let (a, b) = (&inv.i3p, &inv.i3pp);
    let num = q(16) * cube(&(b * b - q(16) * a * b + q(16) * a * a));
    let den = a * b * b * b * b * (a - b);
    if den.is_zero() {
        return Err(Error::NegativeValuation);
    }
    res(&(num / den), ctx)
}

/// Igusa polynomials in (I3', I3'', I6, I), before rescaling.
pub fn lop_igusa_raw(inv: &QuarticInvariants) -> [Q; 5] {
    let (a, b, s, i) = (&inv.i3p, &inv.i3pp, &inv.i6, &inv.iinv);
    let b2 = b * b;
    let b4 = &b2 * &b2;
    let i2 = i * i;
    let i3 = &i2 * i;
    let j2 = a * b - &b2 + q(2) * s + q(24) * i;
    let j4 = &b2 * s + q(64) * a * b * i - q(64) * &b2 * i + q(128) * s * i + q(768) * &i2;
    let j6 = &b2 * s * i - q(32) * a * b * &i2 + q(32) * &b2 * &i2 - q(64) * s * &i2 - q(256) * &i3;
    let j8 = &b4 * s * s + q(256) * a * &b2 * b * s * i - q(256) * &b4 * s * i
        + q(512) * &b2 * s * s * i
        + q(4608) * &b2 * s * &i2
        - q(32768) * a * b * &i3
        + q(32768) * &b2 * &i3
        - q(65536) * s * &i3
        - q(196608) * &i2 * &i2;
    let j10 = &b4 * s * s * i;
    [j2, j4, j6, j8, j10]
}

/// Scale factors c_k with raw J_2k = c_k * (standard Igusa J_2k) as a
/// weighted point.
pub const RAW_IGUSA_SCALE: [i64; 5] = [1, 32, -8, -4096, 2048];

/// Igusa invariants of the genus-2 component in the standard normalisation.
pub fn lop_igusa_t1d(inv: &QuarticInvariants, ctx: &ValuedContext) -> Result<ComponentInvariantReport> {
    let raw = lop_igusa_raw(inv);
    let j: Vec<Q> = raw.iter().zip(RAW_IGUSA_SCALE).map(|(x, c)| x / q(c)).collect();
    let (_, r) = weighted_residues(&j, &[1, 2, 3, 4, 5], ctx)?;
    let absolute = if j[4].is_zero() {
        None
    } else {
        let x = j[0].pow(5) / &j[4];
        if val_p(&x, ctx).is_negative() {
            None
        } else {
            Some(res(&x, ctx)?)
        }
    };
    Ok(ComponentInvariantReport::IgusaTuple {
        j: r,
        j2_5_over_j10: absolute,
    })
}

/// Coefficients (c0, c1, c2) of the Candy quadratic. The t I3 I3' I6^2 term
/// carries 96 = 3 * 2^5; with 48 the roots miss the components' j-invariants.
pub fn candy_quadratic(inv: &QuarticInvariants) -> [Q; 3] {
    let (i3, i3p, i6, i) = (&inv.i3, &inv.i3p, &inv.i6, &inv.iinv);
    let t = i3 * i3p;
    let c2 = i6 * i6 * &t;
    let c1 = -q(16)
        * (i6 * i6 * i + q(96) * &t * i6 * i6 + q(768) * &t * i6 * i - q(8192) * &t * &t * i6 + q(4096) * &t * i * i);
    let c0 = q(256) * cube(&(i6 + q(16) * i + q(256) * &t));
    [c0, c1, c2]
}

fn monic(poly: &[ResidueElement]) -> Vec<ResidueElement> {
    match poly.iter().rev().find(|c| !c.is_zero()) {
        Some(lead) => {
            let inv = lead.inv().expect("nonzero");
            poly.iter().map(|c| c.mul(&inv)).collect()
        }
        None => poly.to_vec(),
    }
}

fn quadratic_roots(p: &[ResidueElement]) -> Vec<ResidueElement> {
    let (c0, c1, c2) = (&p[0], &p[1], &p[2]);
    let mut roots = if !c2.is_zero() {
        let two = ResidueElement::new(2, &ctx_of(c0));
        let four = two.mul(&two);
        let disc = c1.mul(c1).sub(&four.mul(c2).mul(c0));
        match disc.sqrt() {
            Some(s) => {
                let d = two.mul(c2).inv().expect("odd p, nonzero leading");
                vec![c1.neg().add(&s).mul(&d), c1.neg().sub(&s).mul(&d)]
            }
            None => Vec::new(),
        }
    } else if !c1.is_zero() {
        vec![c0.neg().mul(&c1.inv().expect("nonzero"))]
    } else {
        Vec::new()
    };
    roots.sort_by(|a, b| a.value().cmp(b.value()));
    roots
}

fn ctx_of(r: &ResidueElement) -> ValuedContext {
    ValuedContext::new(r.modulus().clone()).expect("residues carry a valid prime")
}

/// The Candy quadratic divided by p^(min coefficient valuation) and reduced
/// to F_p. When the reduced leading coefficient vanishes the quadratic does
/// not determine both j-invariants, and the coefficient-level formulas are
/// used instead.
pub fn candy_poly_t1fiii(
    f: &CianiQuartic,
    inv: &QuarticInvariants,
    ctx: &ValuedContext,
) -> Result<ComponentInvariantReport> {
    let coeffs = candy_quadratic(inv);
    let min = coeffs
        .iter()
        .filter_map(|c| val_int(c, ctx))
        .min()
        .ok_or(Error::AllInfinite)?;
    let reduced: Vec<ResidueElement> = coeffs
        .iter()
        .map(|c| res(&(c * ctx.pow(-min)), ctx))
        .collect::<Result<_>>()?;
    if !reduced[2].is_zero() {
        let polynomial = monic(&reduced);
        let roots = quadratic_roots(&polynomial);
        return Ok(ComponentInvariantReport::JPair {
            polynomial,
            degenerate: false,
            roots,
        });
    }
    Ok(ComponentInvariantReport::JPair {
        polynomial: monic(&reduced),
        degenerate: true,
        roots: candy_fallback(f, ctx)?,
    })
}

/// Sorted j-invariants of the two genus-1 components from the coefficient
/// formulas 2^6 (a^2 + 12BC)^3 / (Da^2 4BC) and 2^6 (b^2 + 12AC)^3 / (Db^2 4AC),
/// after permuting coordinates so that the normalised model satisfies
/// nu(C Dc) = 0, nu(A) > 0, nu(B Db) > 0 and nu(B) <= nu(A).
pub fn candy_fallback(f: &CianiQuartic, ctx: &ValuedContext) -> Result<Vec<ResidueElement>> {
    let norm = normalize_coefficient_valuations(&coefficient_valuations(f, ctx));
    let d = deltas(f);
    let s = &norm.shifts;
    let v = &norm.vals;
    let nu_d: Vec<Valuation> = (0..3)
        .map(|i| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            val_p(&d[i], ctx).shifted(&(q(4) * (&s[j] + &s[k])))
        })
        .collect();
    for perm in crate::graphs::permutations(3) {
        let (x, y, w) = (perm[0], perm[1], perm[2]);
        let ok = (&v[w] + &nu_d[w]).is_zero() && v[x].is_positive() && (&v[y] + &nu_d[y]).is_positive() && v[y] <= v[x];
        if !ok {
            continue;
        }
        let (big, mixed) = (&f.quartic, &f.mixed);
        let j =
            |m: &Q, u: &Q, t: &Q, delta: &Q| q(64) * cube(&(m * m + q(12) * u * t)) / (delta * delta * q(4) * u * t);
        let j1 = j(&mixed[x], &big[y], &big[w], &d[x]);
        let j2 = j(&mixed[y], &big[x], &big[w], &d[y]);
        let mut out = vec![res(&j1, ctx)?, res(&j2, ctx)?];
        out.sort_by(|a, b| a.value().cmp(b.value()));
        return Ok(out);
    }
    Err(Error::ArrangementNotFound)
}

pub fn deg_candy_t2biii(ctx: &ValuedContext) -> ComponentInvariantReport {
    ComponentInvariantReport::Const1728 {
        j: ResidueElement::new(1728, ctx),
    }
}

/// The weighted point (2I3' : 16 I3 I3'' : -4 I6 I3), weights (1, 2, 3).
pub fn hyp_handoff_t2c(inv: &QuarticInvariants) -> [Q; 3] {
    [q(2) * &inv.i3p, q(16) * &inv.i3 * &inv.i3pp, q(-4) * &inv.i6 * &inv.i3]
}

fn components(
    case_id: &str,
    f: &CianiQuartic,
    inv: &QuarticInvariants,
    ctx: &ValuedContext,
) -> Result<ComponentInvariantReport> {
    use ComponentInvariantReport as R;
    Ok(match case_id {
        "T1.a" => R::JInvariant {
            j: loop_j_t1a(inv, ctx)?,
        },
        "T1.d" => lop_igusa_t1d(inv, ctx)?,
        "T1.f.iii" => candy_poly_t1fiii(f, inv, ctx)?,
        "T1.f.v" => R::JInvariant {
            j: tree_j_t1fv(inv, ctx)?,
        },
        "T1.f.vi" => R::JInvariant {
            j: winkycat_j_t1fvi(inv, ctx)?,
        },
        "T1.g" => R::JInvariant {
            j: loop_j_t1g(inv, ctx)?,
        },
        "T2.b.iii" | "T2.c.vii" => deg_candy_t2biii(ctx),
        "T2.c.ii" => R::JInvariant {
            j: hyperelliptic::loop_j_from_l(&hyp_handoff_t2c(inv), ctx)?,
        },
        c if c.starts_with("T2.c") => {
            let (_, l) = weighted_residues(&hyp_handoff_t2c(inv), &[1, 2, 3], ctx)?;
            R::HypInvariantPoint { l }
        }
        _ => R::None,
    })
}

/// Full pipeline: invariants, profile, table match and component invariants.
pub fn classify_quartic(f: &CianiQuartic, ctx: &ValuedContext) -> Result<ClassificationResult> {
    let inv = invariants(f)?;
    let profile = profile_of(&inv, ctx)?;
    let m = classify_case(&profile)?;
    let components = components(m.case_id, f, &inv, ctx)?;
    Ok(ClassificationResult {
        case_id: m.case_id.to_string(),
        reduction_type: m.reduction_type,
        graph: m.graph,
        components,
        profile: Profile::Quartic(profile),
    })
}
