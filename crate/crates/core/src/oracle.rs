//! Decorated graph of the marked quotient conic computed directly from the six
//! branch points, by comparing Möbius coordinates over the valuation ring.
//!
//! Only inputs whose three discriminants are rational squares are supported,
//! so that every point and coordinate is defined over Q.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{edge_labels, DecoratedGraph, DecoratedGraphType, Label, MarkedTree};
use crate::quartic::{deltas, invariants, CianiQuartic};
use crate::valuation::{q, residue, val_int, ResidueElement, ValuedContext, Q};

/// A Ciani quartic together with the roots of its three branch quadratics
/// T^2 - 2aT + 4BC, T^2 - 2bT + 4AC and T^2 - 2cT + 4AB.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalBranchData {
    pub q: CianiQuartic,
    pub alpha: Q,
    pub alpha2: Q,
    pub beta: Q,
    pub beta2: Q,
    pub gamma: Q,
    pub gamma2: Q,
}

fn rational_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let root = |n: &BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(Q::new(root(x.numer())?, root(x.denom())?))
}

impl RationalBranchData {
    /// Branch data of a smooth quartic, if all three discriminants are squares.
    pub fn from_quartic(f: &CianiQuartic) -> Result<Self> {
        invariants(f)?;
        let f = f.clone().validated()?;
        let d = deltas(&f);
        let mut roots = Vec::with_capacity(6);
        for (m, delta) in f.mixed.iter().zip(&d) {
            let s = rational_sqrt(delta)
                .ok_or_else(|| Error::InvalidBranchData(format!("discriminant {delta} is not a rational square")))?;
            roots.push(m + &s);
            roots.push(m - s);
        }
        let [alpha, alpha2, beta, beta2, gamma, gamma2]: [Q; 6] = roots.try_into().expect("six roots");
        Ok(RationalBranchData {
            q: f,
            alpha,
            alpha2,
            beta,
            beta2,
            gamma,
            gamma2,
        })
    }

    /// Build the quartic from (A, B, C) and one root of each branch quadratic:
    /// the partner root is 4BC / alpha and a = (alpha + alpha') / 2.
    pub fn from_roots(big: [Q; 3], roots: [Q; 3]) -> Result<Self> {
        let [ca, cb, cc] = &big;
        let [alpha, beta, gamma] = roots;
        if alpha.is_zero() || beta.is_zero() || gamma.is_zero() {
            return Err(Error::InvalidBranchData("branch root is zero".into()));
        }
        let alpha2 = q(4) * cb * cc / &alpha;
        let beta2 = q(4) * ca * cc / &beta;
        let gamma2 = q(4) * ca * cb / &gamma;
        let half = |x: &Q, y: &Q| (x + y) / q(2);
        let f = CianiQuartic::new([
            ca.clone(),
            cb.clone(),
            cc.clone(),
            half(&alpha, &alpha2),
            half(&beta, &beta2),
            half(&gamma, &gamma2),
        ]);
        invariants(&f)?;
        let q = f.validated()?;
        Ok(RationalBranchData {
            q,
            alpha,
            alpha2,
            beta,
            beta2,
            gamma,
            gamma2,
        })
    }
}

/// Point of P^2 or P^1 over Q in homogeneous coordinates.
pub type Vec3 = [Q; 3];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjPoint {
    pub x: Q,
    pub y: Q,
}

impl ProjPoint {
    pub fn new(x: Q, y: Q) -> Self {
        ProjPoint { x, y }
    }

    /// Coprime integer representative with a nonnegative leading entry.
    pub fn canonical(&self) -> (BigInt, BigInt) {
        let l = num_integer::lcm(self.x.denom().clone(), self.y.denom().clone());
        let (mut a, mut b) = (
            (&self.x * Q::from(l.clone())).to_integer(),
            (&self.y * Q::from(l)).to_integer(),
        );
        let g = num_integer::gcd(a.clone(), b.clone());
        a /= &g;
        b /= &g;
        if a.is_negative() || (a.is_zero() && b.is_negative()) {
            a = -a;
            b = -b;
        }
        (a, b)
    }

    pub fn same(&self, o: &ProjPoint) -> bool {
        &self.x * &o.y == &self.y * &o.x
    }
}

/// Six labelled points: (point, label) with labels 1, 1, 2, 2, 3, 3.
pub fn branch_points(d: &RationalBranchData) -> Result<Vec<(Vec3, Label)>> {
    let [ca, cb, cc] = &d.q.quartic;
    let m2 = |x: &Q| q(-2) * x;
    let pts = vec![
        ([q(0), d.alpha.clone(), m2(cb)], 1),
        ([q(0), m2(cc), d.alpha.clone()], 1),
        ([m2(cc), q(0), d.beta.clone()], 2),
        ([d.beta.clone(), q(0), m2(ca)], 2),
        ([d.gamma.clone(), m2(ca), q(0)], 3),
        ([m2(cb), d.gamma.clone(), q(0)], 3),
    ];
    if pts.iter().any(|(p, _)| p.iter().all(Zero::is_zero)) {
        return Err(Error::DegeneratePoint);
    }
    Ok(pts)
}

fn det3(a: &Vec3, b: &Vec3, c: &Vec3) -> Q {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

fn unit(i: usize) -> Vec3 {
    let mut e = [q(0), q(0), q(0)];
    e[i] = q(1);
    e
}

/// Gradient of A u^2 + B v^2 + C w^2 + a vw + b uw + c uv at p.
fn conic_gradient(f: &CianiQuartic, p: &Vec3) -> Vec3 {
    let [ca, cb, cc] = &f.quartic;
    let [a, b, c] = &f.mixed;
    let [u, v, w] = p;
    [
        q(2) * ca * u + c * v + b * w,
        c * u + q(2) * cb * v + a * w,
        b * u + a * v + q(2) * cc * w,
    ]
}

/// Project the conic from `base` onto the pencil of lines through it; the
/// base point itself maps to its tangent direction.
pub fn parametrize_from(f: &CianiQuartic, base: &Vec3, pts: &[Vec3]) -> Vec<ProjPoint> {
    let (e1, e2) = [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .map(|(i, j)| (unit(i), unit(j)))
        .find(|(e1, e2)| !det3(base, e1, e2).is_zero())
        .expect("a nonzero point extends to a basis");
    let grad = conic_gradient(f, base);
    let dot = |x: &Vec3, y: &Vec3| x.iter().zip(y).map(|(a, b)| a * b).sum::<Q>();
    pts.iter()
        .map(|p| {
            let s = det3(base, p, &e2);
            let t = det3(base, &e1, p);
            if s.is_zero() && t.is_zero() {
                ProjPoint::new(dot(&grad, &e2), -dot(&grad, &e1))
            } else {
                ProjPoint::new(s, t)
            }
        })
        .collect()
}

/// The six labelled points on P^1, projecting from P_a.
pub fn parametrize_conic(d: &RationalBranchData) -> Result<Vec<(ProjPoint, Label)>> {
    let pts = branch_points(d)?;
    let base = pts[0].0.clone();
    let coords: Vec<Vec3> = pts.iter().map(|p| p.0.clone()).collect();
    Ok(parametrize_from(&d.q, &base, &coords)
        .into_iter()
        .zip(pts.iter().map(|p| p.1))
        .collect())
}

/// 2x2 rational matrix acting on column vectors (x, y).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoebiusMap(pub [[Q; 2]; 2]);

impl MoebiusMap {
    /// The coordinate sending (p, q, r) to (0, 1, infinity).
    pub fn from_triple(p: &ProjPoint, qq: &ProjPoint, r: &ProjPoint) -> Self {
        let det = |a: &ProjPoint, b: &ProjPoint| &a.x * &b.y - &a.y * &b.x;
        let k1 = det(qq, r);
        let k2 = det(qq, p);
        MoebiusMap([[&k1 * &p.y, -(&k1 * &p.x)], [&k2 * &r.y, -(&k2 * &r.x)]])
    }

    pub fn det(&self) -> Q {
        let m = &self.0;
        &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
    }

    pub fn adjugate(&self) -> Self {
        let m = &self.0;
        MoebiusMap([[m[1][1].clone(), -m[0][1].clone()], [-m[1][0].clone(), m[0][0].clone()]])
    }

    pub fn compose(&self, o: &MoebiusMap) -> Self {
        let (a, b) = (&self.0, &o.0);
        let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        MoebiusMap([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        let m = &self.0;
        ProjPoint::new(&m[0][0] * &p.x + &m[0][1] * &p.y, &m[1][0] * &p.x + &m[1][1] * &p.y)
    }

    /// Scale so that the minimal entry valuation is zero.
    fn primitive(&self, ctx: &ValuedContext) -> Self {
        let min = self
            .0
            .iter()
            .flatten()
            .filter_map(|x| val_int(x, ctx))
            .min()
            .unwrap_or(0);
        let s = ctx.pow(-min);
        MoebiusMap(self.0.clone().map(|row| row.map(|x| x * &s)))
    }
}

/// Point of P^1(F_p).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ResiduePoint {
    Finite(u64),
    Infinity,
}

impl fmt::Display for ResiduePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResiduePoint::Finite(v) => write!(f, "{v}"),
            ResiduePoint::Infinity => write!(f, "inf"),
        }
    }
}

fn residue_point(x: &ResidueElement, y: &ResidueElement) -> ResiduePoint {
    match y.inv() {
        Some(yi) => ResiduePoint::Finite(x.mul(&yi).to_u64().expect("residues of word-size primes")),
        None => ResiduePoint::Infinity,
    }
}

/// Reduction of a point of P^1(Q) to P^1(F_p).
pub fn specialize(p: &ProjPoint, ctx: &ValuedContext) -> ResiduePoint {
    let min = [&p.x, &p.y]
        .into_iter()
        .filter_map(|x| val_int(x, ctx))
        .min()
        .unwrap_or(0);
    let s = ctx.pow(-min);
    let r = |x: &Q| residue(&(x * &s), ctx).expect("nonnegative after scaling");
    residue_point(&r(&p.x), &r(&p.y))
}

/// Two coordinates extend to the same model iff xi1 xi2^-1 is, up to
/// scaling, invertible over Z_(p).
pub fn equivalent(xi1: &MoebiusMap, xi2: &MoebiusMap, ctx: &ValuedContext) -> bool {
    let m = xi1.compose(&xi2.adjugate()).primitive(ctx);
    val_int(&m.det(), ctx) == Some(0)
}

/// Point where the component of `from` is attached on the component of `to`,
/// in the coordinate `to`.
fn direction(from: &MoebiusMap, to: &MoebiusMap, ctx: &ValuedContext) -> Result<ResiduePoint> {
    let m = to.compose(&from.adjugate()).primitive(ctx);
    let r: Vec<Vec<ResidueElement>> =
        m.0.iter()
            .map(|row| row.iter().map(|x| residue(x, ctx)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
    let det = r[0][0].mul(&r[1][1]).sub(&r[0][1].mul(&r[1][0]));
    if !det.is_zero() {
        return Err(Error::RankAnomaly);
    }
    let col = if !r[0][0].is_zero() || !r[1][0].is_zero() { 0 } else { 1 };
    if r[0][col].is_zero() && r[1][col].is_zero() {
        return Err(Error::RankAnomaly);
    }
    Ok(residue_point(&r[0][col], &r[1][col]))
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleTree {
    /// Representative ordered triple of point indices for each component.
    pub classes: Vec<[usize; 3]>,
    /// specializations[c][i]: image of point i on component c.
    pub specializations: Vec<Vec<ResiduePoint>>,
    /// attachments[c][d]: where component d meets the line of component c.
    pub attachments: Vec<Vec<Option<ResiduePoint>>>,
    pub edges: Vec<(usize, usize)>,
    /// (component, label) for each input point, in input order.
    pub marks: Vec<(usize, Label)>,
    pub edge_labels: Vec<Label>,
}

impl OracleTree {
    pub fn decorated_graph(&self) -> DecoratedGraph {
        DecoratedGraph {
            tree: MarkedTree {
                components: self.classes.len(),
                edges: self.edges.clone(),
                marks: self.marks.clone(),
            },
            edge_labels: self.edge_labels.clone(),
        }
    }
}

/// Stably marked tree of six labelled, pairwise distinct points of P^1(Q).
pub fn build_tree(points: &[(ProjPoint, Label)], ctx: &ValuedContext) -> Result<OracleTree> {
    let n = points.len();
    for i in 0..n {
        for j in 0..i {
            if points[i].0.same(&points[j].0) {
                return Err(Error::InvalidBranchData("branch points collide".into()));
            }
        }
    }
    let mut reps: Vec<([usize; 3], MoebiusMap)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                let xi = MoebiusMap::from_triple(&points[i].0, &points[j].0, &points[k].0);
                if !reps.iter().any(|(_, r)| equivalent(r, &xi, ctx)) {
                    reps.push(([i, j, k], xi));
                }
            }
        }
    }
    let m = reps.len();
    let specializations: Vec<Vec<ResiduePoint>> = reps
        .iter()
        .map(|(_, xi)| points.iter().map(|(p, _)| specialize(&xi.apply(p), ctx)).collect())
        .collect();
    let mut attachments = vec![vec![None; m]; m];
    for (t, row) in attachments.iter_mut().enumerate() {
        for (u, cell) in row.iter_mut().enumerate() {
            if t != u {
                *cell = Some(direction(&reps[u].1, &reps[t].1, ctx)?);
            }
        }
    }
    let mut edges = Vec::new();
    for t in 0..m {
        for u in t + 1..m {
            if (0..m)
                .filter(|&w| w != t && w != u)
                .all(|w| attachments[w][t] == attachments[w][u])
            {
                edges.push((t, u));
            }
        }
    }
    let mut marks = Vec::with_capacity(n);
    for (i, (_, label)) in points.iter().enumerate() {
        let homes: Vec<usize> = (0..m)
            .filter(|&c| {
                attachments[c]
                    .iter()
                    .all(|a| a.as_ref() != Some(&specializations[c][i]))
            })
            .collect();
        match homes[..] {
            [c] => marks.push((c, *label)),
            _ => return Err(Error::NotATree),
        }
    }
    let tree = MarkedTree {
        components: m,
        edges: edges.clone(),
        marks: marks.clone(),
    };
    if !tree.is_tree() {
        return Err(Error::NotATree);
    }
    tree.validate()?;
    let labels = edge_labels(&tree).edge_labels;
    Ok(OracleTree {
        classes: reps.into_iter().map(|r| r.0).collect(),
        specializations,
        attachments,
        edges,
        marks,
        edge_labels: labels,
    })
}

pub fn oracle_tree(d: &RationalBranchData, ctx: &ValuedContext) -> Result<OracleTree> {
    build_tree(&parametrize_conic(d)?, ctx)
}

pub fn oracle_classify(d: &RationalBranchData, ctx: &ValuedContext) -> Result<DecoratedGraphType> {
    oracle_tree(d, ctx)?
        .decorated_graph()
        .tree
        .decorated_type()
        .ok_or(Error::UnknownType)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::qq;

    fn ctx(p: i64) -> ValuedContext {
        ValuedContext::new(p).unwrap()
    }

    fn pt(x: i64, y: i64) -> ProjPoint {
        ProjPoint::new(q(x), q(y))
    }

    fn cross_ratio(p: &[ProjPoint]) -> Q {
        let d = |a: &ProjPoint, b: &ProjPoint| &a.x * &b.y - &a.y * &b.x;
        d(&p[0], &p[2]) * d(&p[1], &p[3]) / (d(&p[0], &p[3]) * d(&p[1], &p[2]))
    }

    #[test]
    fn branch_points_of_square_data() {
        let f = CianiQuartic::from_ints([1, 4, 9, 13, 10, -5]);
        let d = RationalBranchData::from_quartic(&f).unwrap();
        assert_eq!(d.alpha, q(18));
        assert_eq!(d.alpha2, q(8));
        let pts = branch_points(&d).unwrap();
        assert_eq!(pts[0].0, [q(0), q(18), q(-8)]);
        assert_eq!(pts.iter().map(|p| p.1).collect::<Vec<_>>(), vec![1, 1, 2, 2, 3, 3]);
        let sample = CianiQuartic::from_ints([2, 2, 15, -11, -11, 3]);
        assert!(matches!(
            RationalBranchData::from_quartic(&sample),
            Err(Error::InvalidBranchData(_))
        ));
    }

    #[test]
    fn points_lie_on_conic_and_parametrize_injectively() {
        let d = RationalBranchData::from_roots([q(1), q(2), q(3)], [q(1), q(2), q(5)]).unwrap();
        let [ca, cb, cc] = &d.q.quartic;
        let [a, b, c] = &d.q.mixed;
        for (p, _) in branch_points(&d).unwrap() {
            let [u, v, w] = &p;
            let val = ca * u * u + cb * v * v + cc * w * w + a * v * w + b * u * w + c * u * v;
            assert!(val.is_zero());
        }
        let par = parametrize_conic(&d).unwrap();
        for i in 0..6 {
            for j in 0..i {
                assert!(!par[i].0.same(&par[j].0));
            }
        }
        let pts = branch_points(&d).unwrap();
        let coords: Vec<Vec3> = pts.iter().map(|p| p.0.clone()).collect();
        let other = parametrize_from(&d.q, &coords[3], &coords);
        let first: Vec<ProjPoint> = par.iter().map(|p| p.0.clone()).collect();
        for quad in [[0, 1, 2, 3], [1, 2, 4, 5], [0, 3, 4, 5]] {
            let a: Vec<_> = quad.iter().map(|&i| first[i].clone()).collect();
            let b: Vec<_> = quad.iter().map(|&i| other[i].clone()).collect();
            assert_eq!(cross_ratio(&a), cross_ratio(&b));
        }
    }

    #[test]
    fn equivalence_examples() {
        let c = ctx(5);
        let (zero, one, inf, p) = (pt(0, 1), pt(1, 1), pt(1, 0), pt(5, 1));
        let xi = MoebiusMap::from_triple(&zero, &one, &inf);
        assert!(equivalent(&xi, &xi, &c));
        assert!(!equivalent(&xi, &MoebiusMap::from_triple(&zero, &p, &inf), &c));
        assert!(equivalent(&xi, &MoebiusMap::from_triple(&one, &zero, &inf), &c));
    }

    fn labelled(xs: &[ProjPoint]) -> Vec<(ProjPoint, Label)> {
        xs.iter().cloned().zip([1, 1, 2, 2, 3, 3]).collect()
    }

    #[test]
    fn generic_points_give_one_component() {
        let pts = labelled(&[pt(0, 1), pt(1, 1), pt(1, 0), pt(2, 1), pt(3, 1), pt(4, 1)]);
        let t = build_tree(&pts, &ctx(7)).unwrap();
        assert_eq!(t.classes.len(), 1);
        assert_eq!(t.decorated_graph().tree.decorated_type(), Some(DecoratedGraphType::I));
    }

    #[test]
    fn colliding_pair_splits_off() {
        // 0 and 5 collide at p = 5; 1, inf, 2, 3 stay apart.
        let pts: Vec<(ProjPoint, Label)> = [
            (pt(0, 1), 1),
            (pt(5, 1), 1),
            (pt(1, 1), 2),
            (pt(1, 0), 2),
            (pt(2, 1), 3),
            (pt(3, 1), 3),
        ]
        .into_iter()
        .collect();
        let t = build_tree(&pts, &ctx(5)).unwrap();
        assert_eq!(t.classes.len(), 2);
        assert_eq!(t.edges, vec![(0, 1)]);
        assert_eq!(t.marks[0].0, t.marks[1].0);
        assert_ne!(t.marks[0].0, t.marks[2].0);
        assert_eq!(t.edge_labels, vec![0]);
    }

    #[test]
    fn attachments_agree_with_specializations() {
        let pts: Vec<(ProjPoint, Label)> = [
            (ProjPoint::new(q(0), q(1)), 1),
            (ProjPoint::new(q(25), q(1)), 1),
            (ProjPoint::new(q(5), q(1)), 2),
            (ProjPoint::new(q(1), q(1)), 2),
            (ProjPoint::new(q(1), q(0)), 3),
            (ProjPoint::new(qq(1, 5), q(1)), 3),
        ]
        .into_iter()
        .collect();
        let c = ctx(5);
        let t = build_tree(&pts, &c).unwrap();
        assert!(t.classes.len() >= 3);
        for &(a, b) in &t.edges {
            for (i, &(home, _)) in t.marks.iter().enumerate() {
                if home == a {
                    assert_eq!(Some(&t.specializations[b][i]), t.attachments[b][a].as_ref());
                }
            }
        }
    }
}
