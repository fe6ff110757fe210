//! Acceptance suite: one PASS/FAIL line per criterion. Known deviations are
//! reported as FAIL with a reason and do not fail the run; any other failure
//! exits nonzero.

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use ciani::classifier::{classify_quartic, ComponentInvariantReport};
use ciani::error::Error;
use ciani::graphs::{edge_labels, enumerate_decorated, stable_graph_of, type_name, DecoratedGraphType, StableType};
use ciani::hyperelliptic::{classify_hyp, HypCianiModel};
use ciani::oracle::{oracle_classify, RationalBranchData};
use ciani::quartic::{
    apply_transform, coefficient_valuations, invariants, normalize_coefficient_valuations, valuation_profile,
    CianiQuartic, Transform, INVARIANT_WEIGHTS,
};
use ciani::valuation::{
    canonical_shift, q, residue, val_p, weighted_equal, weighted_residues, ResidueElement, Valuation, ValuedContext, Q,
};
use common::*;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};

struct Outcome {
    ok: bool,
    detail: String,
    /// Reason a failure is an accepted, recorded deviation.
    known: Option<&'static str>,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
        known: None,
    }
}

fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

fn ctx(p: i64) -> ValuedContext {
    ValuedContext::new(p).unwrap()
}

fn kind_name(f: &CianiQuartic, p: i64) -> String {
    classify_quartic(f, &ctx(p))
        .unwrap()
        .reduction_type
        .kind
        .name()
        .to_string()
}

fn criterion_1() -> Outcome {
    let f = CianiQuartic::from_ints([2, 2, 15, -11, -11, 3]);
    let inv = invariants(&f).unwrap();
    let types = [kind_name(&f, 3), kind_name(&f, 5), kind_name(&f, 7)];
    let types_ok = types == ["Lop", "Lop", "Loop"];
    let odd_part = q(3 * 5 * 49);
    let abs = inv.delta_y.abs();
    let two_power = &abs / &odd_part;
    let mut o = check(
        types_ok && inv.i3pp == q(16) && two_power == q(4),
        format!(
            "types {types:?}, I3'' = {}, |Delta(Y)| = {abs} = 2^? * 3 * 5 * 7^2 with 2-part {two_power}",
            inv.i3pp
        ),
    );
    if types_ok && inv.i3pp == q(16) && two_power == q(1) / q(4) {
        o.known = Some("discriminant normalisation 2^-20 gives 2-part 2^-2, example states 2^2");
    }
    o
}

/// Invariants straight from the coefficients, without the library.
fn raw_invariants(f: &CianiQuartic) -> [Q; 5] {
    let [ca, cb, cc] = f.quartic.clone();
    let [a, b, c] = f.mixed.clone();
    let da = &a * &a - q(4) * &cb * &cc;
    let db = &b * &b - q(4) * &ca * &cc;
    let dc = &c * &c - q(4) * &ca * &cb;
    let i3 = &ca * &cb * &cc;
    let i3p = &ca * &da + &cb * &db + &cc * &dc;
    let i3pp = q(-4) * &i3 + &ca * &a * &a + &cb * &b * &b + &cc * &c * &c - &a * &b * &c;
    let i6 = &da * &db * &dc;
    let i = &ca * &cb * &da * &db + &ca * &cc * &da * &dc + &cb * &cc * &db * &dc;
    [i3, i3p, i3pp, i6, i]
}

fn criterion_2() -> Outcome {
    let mut r = rng(2);
    let mut bad = 0;
    for _ in 0..1000 {
        let f = random_smooth_quartic(&mut r, 30);
        let [i3, i3p, i3pp, i6, i] = raw_invariants(&f);
        let relation = q(4) * &i + &i6 - &i3p * &i3p + q(16) * &i3 * &i3pp + q(2) * &i3p * &i3pp - &i3pp * &i3pp;
        let [ca, cb, cc] = f.quartic.clone();
        let [a, b, c] = f.mixed.clone();
        let da = &a * &a - q(4) * &cb * &cc;
        let db = &b * &b - q(4) * &ca * &cc;
        let dc = &c * &c - q(4) * &ca * &cb;
        let scale = q(1) / q(1 << 20);
        let direct = -&scale * &ca * &cb * &cc * (&da * &da) * (&db * &db) * (&dc * &dc) * i3pp.pow(4);
        let via = -&scale * &i3 * i3pp.pow(4) * &i6 * &i6;
        let lib = invariants(&f).unwrap();
        if !relation.is_zero() || direct != via || lib.delta_y != via || lib.five() != [i3, i3p, i3pp, i6, i] {
            bad += 1;
        }
    }
    check(bad == 0, format!("1000 random quartics, {bad} violations"))
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let mut checked = 0;
    let mut bad = Vec::new();
    while checked < 1000 {
        let f = random_smooth_quartic(&mut r, 20);
        let primes = odd_primes_of(&invariants(&f).unwrap().delta_y);
        let p = if primes.is_empty() {
            3
        } else {
            primes[r.gen_range(0..primes.len())]
        };
        let t = random_transform(&mut r, &[p, 2]);
        let g = apply_transform(&f, &t);
        let c = ctx(p);
        let same = match (classify_quartic(&f, &c), classify_quartic(&g, &c)) {
            (Ok(x), Ok(y)) => x.same_outcome(&y),
            (Err(Error::UnmatchedProfile(x)), Err(Error::UnmatchedProfile(y))) => x.normalized() == y.normalized(),
            _ => false,
        };
        if !same {
            bad.push(format!("{f} p={p}"));
        }
        checked += 1;
    }
    check(
        bad.is_empty(),
        format!("{checked} (curve, transform, prime) triples, mismatches {bad:?}"),
    )
}

fn criterion_4() -> Outcome {
    let classes = enumerate_decorated();
    let mut types: Vec<StableType> = classes
        .iter()
        .map(|g| type_name(&stable_graph_of(&g.tree).unwrap()).unwrap())
        .collect();
    types.sort();
    types.dedup();
    let mismatched: Vec<&str> = DecoratedGraphType::ALL
        .iter()
        .filter(|g| g.stable_type() != g.listed_type())
        .map(|g| g.name())
        .collect();
    let rep = DecoratedGraphType::III5.representative();
    let labels = edge_labels(&rep).edge_labels;
    let tree = stable_graph_of(&rep).unwrap();
    let tree_ok = labels == vec![2, 0] && type_name(&tree).unwrap() == StableType::Tree;
    let structural = classes.len() == 20 && types.len() == 13 && tree_ok;
    let mut o = check(
        structural && mismatched.is_empty(),
        format!(
            "{} classes, {} stable types, III.5 labels {labels:?}, table entries differing from the cover computation: {mismatched:?}",
            classes.len(),
            types.len()
        ),
    );
    if structural && mismatched == ["IV.5", "IV*.2"] {
        o.known = Some(
            "listed types Braid (IV.5) and DNA (IV*.2) contradict the V-cover genus count; computed Grl Pwr and Cat",
        );
    }
    o
}

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

fn parse_q(s: &str) -> Q {
    match s.split_once('/') {
        Some((n, d)) => Q::new(n.parse().unwrap(), d.parse().unwrap()),
        None => Q::from_integer(s.parse().unwrap()),
    }
}

/// (label, p, quartic) rows of the frozen oracle corpus.
fn corpus() -> Vec<(String, i64, CianiQuartic)> {
    fs::read_to_string(data_dir().join("oracle_corpus.csv"))
        .unwrap()
        .lines()
        .skip(1)
        .filter(|l| !l.is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            let c: Vec<Q> = f[2..8].iter().map(|s| parse_q(s)).collect();
            (
                f[0].to_string(),
                f[1].parse().unwrap(),
                CianiQuartic::new(c.try_into().unwrap()),
            )
        })
        .collect()
}

fn criterion_5() -> Outcome {
    let required = [
        "T1.a", "T1.b", "T1.c", "T1.d", "T1.e", "T1.f.i", "T1.f.ii", "T1.f.iii", "T1.f.iv", "T1.f.v", "T1.f.vi",
        "T1.g", "T1.h", "T2.a", "T2.b.i", "T2.b.ii", "T2.b.iii", "T2.d", "T2.e",
    ];
    let c_cases = [
        "T2.c.i", "T2.c.ii", "T2.c.iii", "T2.c.iv", "T2.c.v", "T2.c.vi", "T2.c.vii",
    ];
    let manifest = fs::read_to_string(data_dir().join("oracle_manifest.txt")).unwrap();
    let unreachable: Vec<&str> = manifest
        .lines()
        .filter_map(|l| l.strip_prefix("unreachable:"))
        .flat_map(str::split_whitespace)
        .collect();
    let rows = corpus();
    let mut count: BTreeMap<String, usize> = BTreeMap::new();
    let mut disagreements = Vec::new();
    for (label, p, f) in &rows {
        let c = ctx(*p);
        let cls = classify_quartic(f, &c).unwrap();
        let orc = oracle_classify(&RationalBranchData::from_quartic(f).unwrap(), &c).unwrap();
        if cls.graph != orc {
            disagreements.push(label.clone());
        }
        *count.entry(cls.case_id).or_default() += 1;
    }
    let missing: Vec<&str> = required.iter().copied().filter(|c| !count.contains_key(*c)).collect();
    let unlisted: Vec<&str> = c_cases
        .iter()
        .copied()
        .filter(|c| !count.contains_key(*c) && !unreachable.contains(c))
        .collect();
    check(
        disagreements.is_empty() && missing.is_empty() && unlisted.is_empty(),
        format!(
            "{} fixtures over {} cases, disagreements {disagreements:?}, missing {missing:?}, unlisted {unlisted:?}, declared unreachable {unreachable:?}",
            rows.len(),
            count.len()
        ),
    )
}

/// Cyclically permute coordinates so that index `i` moves to the first slot.
fn rotate_to(f: &CianiQuartic, i: usize) -> CianiQuartic {
    let perm = match i {
        0 => [0, 1, 2],
        1 => [2, 0, 1],
        _ => [1, 2, 0],
    };
    let g = apply_transform(f, &Transform::permutation(perm));
    debug_assert_eq!(g.quartic[0], f.quartic[i]);
    g
}

fn modp(x: &Q, p: i64) -> i64 {
    let r = residue(x, &ctx(p)).unwrap();
    r.to_u64().unwrap() as i64
}

/// j of the genus-1 component of a Loop reduction with Delta_a = 0 mod p,
/// from the reduced model. Mod p, B y^4 + a y^2 z^2 + C z^4 = (s y^2 + t z^2)^2
/// and the component is birational to the intersection of the quadrics
/// A x^2 + c y^2 + w^2 + b z^2 and s y^2 + t z^2 - w x, whose Jacobian is
/// y^2 = det(l Q1 + Q2) = (c l + s)(b l + t)(A l^2 - 1/4). None when B is not
/// a square mod p.
fn loop_quadric_j(f: &CianiQuartic, p: i64) -> Option<ResidueElement> {
    let [ca, cb, _] = f.quartic.clone().map(|x| modp(&x, p));
    let [a, b, c] = f.mixed.clone().map(|x| modp(&x, p));
    let inv = |x: i64| (1..p).find(|y| (x * y).rem_euclid(p) == 1).unwrap();
    let s = (0..p).find(|s| (s * s - cb).rem_euclid(p) == 0)?;
    let t = (a * inv(2 * s)).rem_euclid(p);
    let k = inv(4);
    let m = |x: i64| q(x.rem_euclid(p));
    let co = [
        m(c * b * ca),
        m((c * t + s * b) * ca),
        m(s * t * ca - c * b * k),
        m(-(c * t + s * b) * k),
        m(-s * t * k),
    ];
    quartic_j(co).map(|j| residue(&j, &ctx(p)).unwrap())
}

fn lop_transvectant_j(f: &CianiQuartic) -> [Q; 5] {
    let [_, cb, cc] = f.quartic.clone();
    let [a, b, c] = f.mixed.clone();
    // -(c y^2 + b z^2)(B y^4 + a y^2 z^2 + C z^4) in powers y^(6-i) z^i.
    let sextic = BinaryForm(vec![
        -(&c * &cb),
        q(0),
        -(&c * &a + &b * &cb),
        q(0),
        -(&c * &cc + &b * &a),
        q(0),
        -(&b * &cc),
    ]);
    igusa_j(&sextic)
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    let mut loop_n = 0;
    let mut lop_n = 0;
    let mut failures: Vec<String> = Vec::new();
    let mut tries = 0;
    while (loop_n < 30 || lop_n < 30) && tries < 200_000 {
        tries += 1;
        let p = [3, 5, 7, 11][r.gen_range(0..4)];
        let mut c: [i64; 6] = std::array::from_fn(|_| loop {
            let u = random_unit_free(&mut r, -20, 20);
            if u % p != 0 {
                break u;
            }
        });
        if r.gen_bool(0.5) {
            c[r.gen_range(0..3)] *= p;
        }
        let f = CianiQuartic::from_ints(c);
        let Ok(inv) = invariants(&f) else { continue };
        if inv.delta_y.is_zero() {
            continue;
        }
        let cx = ctx(p);
        let Ok(res) = classify_quartic(&f, &cx) else { continue };
        match (res.case_id.as_str(), &res.components) {
            ("T1.a", ComponentInvariantReport::JInvariant { j }) if loop_n < 30 => {
                let d = [&inv.delta_a, &inv.delta_b, &inv.delta_c];
                let Some(i) = (0..3).find(|&i| val_p(d[i], &cx).is_positive()) else {
                    continue;
                };
                let g = rotate_to(&f, i);
                let Some(want) = loop_quadric_j(&g, p) else { continue };
                if &want != j {
                    failures.push(format!("Loop {f} p={p}"));
                }
                loop_n += 1;
            }
            ("T1.d", ComponentInvariantReport::IgusaTuple { j, .. }) if lop_n < 30 => {
                let Some(i) = (0..3).find(|&i| val_p(&f.quartic[i], &cx).is_positive()) else {
                    continue;
                };
                let g = rotate_to(&f, i);
                let (_, want) = weighted_residues(&lop_transvectant_j(&g), &[1, 2, 3, 4, 5], &cx).unwrap();
                if !weighted_equal(&want, j, &[1, 2, 3, 4, 5]) {
                    failures.push(format!("Lop {f} p={p}"));
                }
                lop_n += 1;
            }
            _ => {}
        }
    }

    let mut const_ok = true;
    for (label, p, f) in corpus() {
        if label.starts_with("T2.b.iii#") {
            let res = classify_quartic(&f, &ctx(p)).unwrap();
            const_ok &= res.components
                == ComponentInvariantReport::Const1728 {
                    j: ResidueElement::new(1728, &ctx(p)),
                };
        }
    }
    let mut hyp_d3 = 0;
    let mut hyp_a = 0;
    for m in -12i64..=12 {
        for n in -12i64..=12 {
            for p in [3i64, 5, 7] {
                let h = HypCianiModel::from_ints(m, n);
                let Ok(h) = h.validated() else { continue };
                let cx = ctx(p);
                let Ok(res) = classify_hyp(&h, &cx) else { continue };
                match (res.case_id.as_str(), &res.components) {
                    ("T3.d.iii", comp) => {
                        hyp_d3 += 1;
                        const_ok &= *comp
                            == ComponentInvariantReport::Const1728 {
                                j: ResidueElement::new(1728, &cx),
                            };
                    }
                    ("T3.a", ComponentInvariantReport::JInvariant { j }) => {
                        hyp_a += 1;
                        // The quotient curve is x^4 + (M - 2) x^2 + 1 when N - 2M + 2
                        // vanishes mod p; x -> ix handles N + 2M + 2.
                        let s = if (n - 2 * m + 2) % p == 0 { m } else { -m };
                        let want = quartic_j([q(1), q(0), q(s - 2), q(0), q(1)]).map(|x| residue(&x, &cx));
                        if want.as_ref().map(|w| w.as_ref().ok()) != Some(Some(j)) {
                            failures.push(format!("hyp (a) M={m} N={n} p={p}"));
                        }
                    }
                    _ => {}
                }
            }
        }
    }
    let enough = loop_n >= 10 && lop_n >= 10 && hyp_a >= 10 && hyp_d3 >= 1;
    check(
        failures.is_empty() && const_ok && enough,
        format!(
            "Loop {loop_n} fixtures, Lop {lop_n} fixtures, hyperelliptic (a) {hyp_a} fixtures, (d.iii) {hyp_d3} fixtures, 1728 reports ok: {const_ok}, failures {failures:?}"
        ),
    )
}

fn criterion_7() -> Outcome {
    let c5 = ctx(5);
    let a = classify_hyp(&HypCianiModel::from_ints(4, 5), &c5).unwrap();
    let b = classify_hyp(&HypCianiModel::from_ints(0, 3), &c5).unwrap();
    let g = classify_hyp(&HypCianiModel::from_ints(0, 0), &ctx(3)).unwrap();
    let a_ok = a.case_id == "T3.a"
        && a.reduction_type.kind.name() == "Loop"
        && a.components
            == ComponentInvariantReport::JInvariant {
                j: ResidueElement::new(3, &c5),
            };
    let b_ok = b.case_id == "T3.b" && b.reduction_type.kind.name() == "DNA";
    let g_ok = g.case_id == "GOOD" && g.reduction_type.kind.is_good();
    check(
        a_ok && b_ok && g_ok,
        format!("(4,5)@5 {}, (0,3)@5 {}, (0,0)@3 {}", a.case_id, b.case_id, g.case_id),
    )
}

fn criterion_8() -> Outcome {
    let mut r = rng(8);
    let mut bad = Vec::new();
    let mut integral = 0;
    for _ in 0..500 {
        let p = [3i64, 5, 7][r.gen_range(0..3)];
        let base = random_smooth_quartic(&mut r, 15);
        let t = random_transform(&mut r, &[p]);
        let f = apply_transform(&base, &t);
        let cx = ctx(p);
        let norm = normalize_coefficient_valuations(&coefficient_valuations(&f, &cx));
        let profile = valuation_profile(&f, &cx).unwrap();
        let raw = profile.raw.clone();
        let entries: Vec<(Valuation, u32)> = raw.iter().cloned().zip(INVARIANT_WEIGHTS).collect();
        let (_, expected) = canonical_shift(&entries).unwrap();
        let total: Q = norm.shifts.iter().sum();
        let observed: Vec<Valuation> = if norm.shifts.iter().all(|s| s.is_integer()) {
            integral += 1;
            let scale = norm.shifts.clone().map(|s| {
                let k = s.to_integer().try_into().unwrap();
                cx.pow(k)
            });
            let g = apply_transform(&f, &Transform::diagonal(scale));
            invariants(&g).unwrap().five().iter().map(|x| val_p(x, &cx)).collect()
        } else {
            raw.iter()
                .zip(INVARIANT_WEIGHTS)
                .map(|(v, w)| v.shifted(&(q(4) * &total * q(w as i64) / q(3))))
                .collect()
        };
        if observed != expected {
            bad.push(format!("{f} p={p}"));
        }
    }
    check(
        bad.is_empty(),
        format!("500 quartics ({integral} with integral shifts), mismatches {bad:?}"),
    )
}

fn criterion_9() -> Outcome {
    let mut r = rng(9);
    let mut multi = 0;
    let mut other = Vec::new();
    let mut unmatched: BTreeMap<String, usize> = BTreeMap::new();
    let mut pairs = 0;
    for _ in 0..10_000 {
        let f = random_smooth_quartic(&mut r, 30);
        for p in odd_primes_of(&invariants(&f).unwrap().delta_y) {
            pairs += 1;
            match classify_quartic(&f, &ctx(p)) {
                Ok(_) => {}
                Err(Error::MultiMatch(_)) => multi += 1,
                Err(Error::UnmatchedProfile(prof)) => {
                    let key = format!(
                        "{:?}",
                        prof.normalized().iter().map(|v| v.to_string()).collect::<Vec<_>>()
                    );
                    let n = unmatched.entry(key).or_default();
                    if *n == 0 {
                        println!("    unmatched witness {f} at p = {p}: {prof}");
                    }
                    *n += 1;
                }
                Err(e) => other.push(format!("{f} p={p}: {e}")),
            }
        }
    }
    let total: usize = unmatched.values().sum();
    check(
        multi == 0 && other.is_empty(),
        format!(
            "{pairs} (curve, prime) pairs, MultiMatch {multi}, other errors {other:?}, UnmatchedProfile {total} over {} profiles (all logged above)",
            unmatched.len()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("sample curve", criterion_1),
        ("identity suite", criterion_2),
        ("transform invariance", criterion_3),
        ("graph calculus", criterion_4),
        ("oracle agreement", criterion_5),
        ("component invariants", criterion_6),
        ("hyperelliptic suite", criterion_7),
        ("normalisation coherence", criterion_8),
        ("table sanity", criterion_9),
    ];
    let mut unexpected = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let status = if o.ok { "PASS" } else { "FAIL" };
        println!("criterion {}: {status} {name}: {}", i + 1, o.detail);
        if !o.ok {
            match o.known {
                Some(reason) => println!("    recorded deviation: {reason}"),
                None => unexpected += 1,
            }
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected failure(s)");
        ExitCode::FAILURE
    }
}
