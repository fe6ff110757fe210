//! Decorated graphs: stable trees of projective lines with six marks labelled
//! by the involutions of the Klein four-group, their admissible covers, and
//! the resulting stable genus-3 graphs.
//!
//! Group elements of V = C2 x C2 are encoded as 0..=3 with XOR as the group
//! law; 1, 2, 3 are the three involutions.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};

pub type Label = u8;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkedTree {
    pub components: usize,
    pub edges: Vec<(usize, usize)>,
    /// (component, label) for each of the six marks.
    pub marks: Vec<(usize, Label)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DecoratedGraph {
    pub tree: MarkedTree,
    pub edge_labels: Vec<Label>,
}

/// Genus-weighted multigraph; self-loops are edges (v, v).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableCurveGraph {
    pub genus: Vec<u32>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum StableType {
    Good,
    Candy,
    DNA,
    Loop,
    Lop,
    Looop,
    Cave,
    WinkyCat,
    Tree,
    GrlPwr,
    Garden,
    Braid,
    Cat,
}

impl StableType {
    pub const ALL: [StableType; 13] = [
        StableType::Good,
        StableType::Candy,
        StableType::DNA,
        StableType::Loop,
        StableType::Lop,
        StableType::Looop,
        StableType::Cave,
        StableType::WinkyCat,
        StableType::Tree,
        StableType::GrlPwr,
        StableType::Garden,
        StableType::Braid,
        StableType::Cat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StableType::Good => "Good",
            StableType::Candy => "Candy",
            StableType::DNA => "DNA",
            StableType::Loop => "Loop",
            StableType::Lop => "Lop",
            StableType::Looop => "Looop",
            StableType::Cave => "Cave",
            StableType::WinkyCat => "Winky Cat",
            StableType::Tree => "Tree",
            StableType::GrlPwr => "Grl Pwr",
            StableType::Garden => "Garden",
            StableType::Braid => "Braid",
            StableType::Cat => "Cat",
        }
    }
}

impl fmt::Display for StableType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DecoratedGraphType {
    I,
    II1,
    II2,
    II3,
    II4,
    III1,
    III2,
    III3,
    III4,
    III5,
    III6,
    III7,
    IV1,
    IV2,
    IV3,
    IV4,
    IV5,
    IVs1,
    IVs2,
    IVs3,
}

use DecoratedGraphType as G;

impl DecoratedGraphType {
    pub const ALL: [DecoratedGraphType; 20] = [
        G::I,
        G::II1,
        G::II2,
        G::II3,
        G::II4,
        G::III1,
        G::III2,
        G::III3,
        G::III4,
        G::III5,
        G::III6,
        G::III7,
        G::IV1,
        G::IV2,
        G::IV3,
        G::IV4,
        G::IV5,
        G::IVs1,
        G::IVs2,
        G::IVs3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            G::I => "I",
            G::II1 => "II.1",
            G::II2 => "II.2",
            G::II3 => "II.3",
            G::II4 => "II.4",
            G::III1 => "III.1",
            G::III2 => "III.2",
            G::III3 => "III.3",
            G::III4 => "III.4",
            G::III5 => "III.5",
            G::III6 => "III.6",
            G::III7 => "III.7",
            G::IV1 => "IV.1",
            G::IV2 => "IV.2",
            G::IV3 => "IV.3",
            G::IV4 => "IV.4",
            G::IV5 => "IV.5",
            G::IVs1 => "IV*.1",
            G::IVs2 => "IV*.2",
            G::IVs3 => "IV*.3",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.name() == s)
    }

    /// The tabulated stable type of each decorated graph.
    pub fn listed_type(self) -> StableType {
        match self {
            G::I => StableType::Good,
            G::II1 | G::III4 => StableType::Candy,
            G::II2 | G::III1 | G::IVs2 => StableType::DNA,
            G::II3 | G::III3 => StableType::Loop,
            G::II4 => StableType::Lop,
            G::III2 | G::IVs3 => StableType::Looop,
            G::III5 => StableType::Tree,
            G::III6 => StableType::WinkyCat,
            G::III7 => StableType::Cave,
            G::IV1 => StableType::GrlPwr,
            G::IV2 => StableType::Garden,
            G::IV3 => StableType::Cat,
            G::IV4 | G::IV5 | G::IVs1 => StableType::Braid,
        }
    }

    /// Stable type obtained by lifting the representative to its V-cover and
    /// stabilising. Differs from `listed_type` for IV.5 and IV*.2.
    pub fn stable_type(self) -> StableType {
        static TYPES: OnceLock<Vec<StableType>> = OnceLock::new();
        let types = TYPES.get_or_init(|| {
            DecoratedGraphType::ALL
                .iter()
                .map(|g| {
                    let s = stable_graph_of(&g.representative()).expect("representatives are valid");
                    type_name(&s).expect("pipeline output is catalogued")
                })
                .collect()
        });
        types[self as usize]
    }

    /// A representative marked tree of the class.
    pub fn representative(self) -> MarkedTree {
        let chain = |groups: &[&[Label]]| {
            let n = groups.len();
            let edges = (1..n).map(|i| (i - 1, i)).collect();
            MarkedTree::new(n, edges, groups)
        };
        let star = |leaves: &[&[Label]]| {
            let mut groups: Vec<&[Label]> = vec![&[]];
            groups.extend_from_slice(leaves);
            MarkedTree::new(4, vec![(0, 1), (0, 2), (0, 3)], &groups)
        };
        match self {
            G::I => chain(&[&[1, 1, 2, 2, 3, 3]]),
            G::II1 => chain(&[&[2, 1, 1], &[2, 3, 3]]),
            G::II2 => chain(&[&[3, 2, 1], &[1, 2, 3]]),
            G::II3 => chain(&[&[1, 1], &[2, 2, 3, 3]]),
            G::II4 => chain(&[&[1, 2], &[1, 2, 3, 3]]),
            G::III1 => chain(&[&[1, 1], &[2, 2], &[3, 3]]),
            G::III2 => chain(&[&[1, 1], &[2, 3], &[2, 3]]),
            G::III3 => chain(&[&[2, 1], &[2, 3], &[3, 1]]),
            G::III4 => chain(&[&[2, 1], &[3, 3], &[2, 1]]),
            G::III5 => chain(&[&[2, 1, 1], &[2], &[3, 3]]),
            G::III6 => chain(&[&[2, 1, 1], &[3], &[2, 3]]),
            G::III7 => chain(&[&[3, 2, 1], &[3], &[2, 1]]),
            G::IV1 => chain(&[&[1, 1], &[2], &[2], &[3, 3]]),
            G::IV2 => chain(&[&[1, 1], &[2], &[3], &[2, 3]]),
            G::IV3 => chain(&[&[2, 1], &[1], &[3], &[2, 3]]),
            G::IV4 => chain(&[&[2, 1], &[3], &[1], &[2, 3]]),
            G::IV5 => chain(&[&[2, 1], &[3], &[3], &[2, 1]]),
            G::IVs1 => star(&[&[1, 1], &[2, 2], &[3, 3]]),
            G::IVs2 => star(&[&[1, 1], &[3, 2], &[3, 2]]),
            G::IVs3 => star(&[&[2, 1], &[3, 2], &[1, 3]]),
        }
    }
}

impl fmt::Display for DecoratedGraphType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for DecoratedGraphType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl MarkedTree {
    pub fn new(components: usize, edges: Vec<(usize, usize)>, groups: &[&[Label]]) -> Self {
        let marks = groups
            .iter()
            .enumerate()
            .flat_map(|(c, ls)| ls.iter().map(move |&l| (c, l)))
            .collect();
        MarkedTree {
            components,
            edges,
            marks,
        }
    }

    fn degree(&self, c: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == c || b == c).count()
    }

    fn marks_on(&self, c: usize) -> impl Iterator<Item = Label> + '_ {
        self.marks.iter().filter(move |m| m.0 == c).map(|m| m.1)
    }

    pub fn is_tree(&self) -> bool {
        if self.components == 0 || self.edges.len() + 1 != self.components {
            return false;
        }
        let mut seen = vec![false; self.components];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_stable(&self) -> bool {
        (0..self.components).all(|c| self.degree(c) + self.marks_on(c).count() >= 3)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.is_tree() {
            return Err(Error::InvalidTree("component graph is not a tree".into()));
        }
        if self.marks.len() != 6 || (1..=3).any(|l| self.marks.iter().filter(|m| m.1 == l).count() != 2) {
            return Err(Error::InvalidTree("each label 1, 2, 3 must occur twice".into()));
        }
        if self.marks.iter().any(|m| m.0 >= self.components) {
            return Err(Error::InvalidTree("mark on a missing component".into()));
        }
        if !self.is_stable() {
            return Err(Error::InvalidTree("unstable component".into()));
        }
        Ok(())
    }

    /// Components on the side of `from` after deleting edge `skip`.
    fn side(&self, from: usize, skip: usize) -> Vec<bool> {
        let mut seen = vec![false; self.components];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(v) = stack.pop() {
            for (i, &(a, b)) in self.edges.iter().enumerate() {
                if i == skip {
                    continue;
                }
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen
    }

    /// Canonical form under component relabelling, label permutations and
    /// reordering of marks within a component.
    pub fn canonical_form(&self) -> Vec<u8> {
        let n = self.components;
        let mut best: Option<Vec<u8>> = None;
        for perm in permutations(n) {
            for sigma in permutations(3) {
                let relabel = |l: Label| sigma[l as usize - 1] as u8 + 1;
                let mut edges: Vec<(u8, u8)> = self
                    .edges
                    .iter()
                    .map(|&(a, b)| {
                        let (x, y) = (perm[a] as u8, perm[b] as u8);
                        (x.min(y), x.max(y))
                    })
                    .collect();
                edges.sort();
                let mut groups: Vec<Vec<u8>> = vec![Vec::new(); n];
                for &(c, l) in &self.marks {
                    groups[perm[c]].push(relabel(l));
                }
                let mut form = vec![n as u8];
                for (a, b) in edges {
                    form.extend([a, b]);
                }
                for mut g in groups {
                    g.sort();
                    form.push(10 + g.len() as u8);
                    form.extend(g);
                }
                if best.as_ref().is_none_or(|b| form < *b) {
                    best = Some(form);
                }
            }
        }
        best.expect("at least one permutation")
    }

    pub fn decorated_type(&self) -> Option<DecoratedGraphType> {
        static FORMS: OnceLock<Vec<Vec<u8>>> = OnceLock::new();
        let forms = FORMS.get_or_init(|| {
            DecoratedGraphType::ALL
                .iter()
                .map(|g| g.representative().canonical_form())
                .collect()
        });
        let form = self.canonical_form();
        DecoratedGraphType::ALL
            .into_iter()
            .zip(forms)
            .find(|(_, f)| **f == form)
            .map(|(g, _)| g)
    }
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Label every edge by the product of the mark labels on one side.
pub fn edge_labels(t: &MarkedTree) -> DecoratedGraph {
    let labels = t
        .edges
        .iter()
        .enumerate()
        .map(|(i, &(a, _))| {
            let side = t.side(a, i);
            t.marks.iter().filter(|m| side[m.0]).fold(0, |acc, m| acc ^ m.1)
        })
        .collect();
    DecoratedGraph {
        tree: t.clone(),
        edge_labels: labels,
    }
}

impl DecoratedGraph {
    /// Nontrivial labels of marks and edges at component c.
    pub fn local_labels(&self, c: usize) -> Vec<Label> {
        let mut s: Vec<Label> = self.tree.marks_on(c).filter(|&l| l != 0).collect();
        for (i, &(a, b)) in self.tree.edges.iter().enumerate() {
            let l = self.edge_labels[i];
            if l != 0 && (a == c || b == c) {
                s.push(l);
            }
        }
        s
    }

    /// Product of all local labels is the identity on each component.
    pub fn labels_balanced(&self) -> bool {
        (0..self.tree.components).all(|c| self.local_labels(c).iter().fold(0, |a, &l| a ^ l) == 0)
    }
}

fn generated_subgroup(s: &[Label]) -> Vec<Label> {
    let mut h: BTreeSet<Label> = BTreeSet::from([0]);
    for &x in s {
        let cur: Vec<Label> = h.iter().copied().collect();
        for y in cur {
            h.insert(x ^ y);
        }
    }
    h.into_iter().collect()
}

fn coset_rep(g: Label, h: &[Label]) -> Label {
    h.iter().map(|&x| x ^ g).min().expect("nonempty subgroup")
}

/// Vertices of an admissible cover, keyed by (component, coset representative).
#[derive(Clone, Debug)]
pub struct CoverData {
    pub graph: StableCurveGraph,
    pub vertex_keys: Vec<(usize, Label)>,
    /// For each node: (tree edge, coset representative of the node).
    pub node_keys: Vec<(usize, Label)>,
}

impl StableCurveGraph {
    pub fn arithmetic_genus(&self) -> i64 {
        self.genus.iter().map(|&g| g as i64).sum::<i64>() + self.edges.len() as i64 - self.genus.len() as i64 + 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    pub fn is_stable(&self) -> bool {
        (0..self.genus.len()).all(|v| self.genus[v] > 0 || self.degree(v) >= 3)
    }

    /// First Betti number of the dual graph.
    pub fn cycle_rank(&self) -> i64 {
        self.edges.len() as i64 - self.genus.len() as i64 + 1
    }

    pub fn is_isomorphic(&self, other: &StableCurveGraph) -> bool {
        let n = self.genus.len();
        if n != other.genus.len() || self.edges.len() != other.edges.len() {
            return false;
        }
        let norm = |edges: &mut Vec<(usize, usize)>| {
            for e in edges.iter_mut() {
                *e = (e.0.min(e.1), e.0.max(e.1));
            }
            edges.sort();
        };
        let mut target = other.edges.clone();
        norm(&mut target);
        permutations(n).into_iter().any(|p| {
            if (0..n).any(|v| self.genus[v] != other.genus[p[v]]) {
                return false;
            }
            let mut mapped: Vec<_> = self.edges.iter().map(|&(a, b)| (p[a], p[b])).collect();
            norm(&mut mapped);
            mapped == target
        })
    }
}

pub fn admissible_cover_data(g: &DecoratedGraph) -> Result<CoverData> {
    let t = &g.tree;
    let mut genus = Vec::new();
    let mut vertex_keys = Vec::new();
    let mut subgroups = Vec::new();
    for c in 0..t.components {
        let s = g.local_labels(c);
        let h = generated_subgroup(&s);
        let gen = match h.len() {
            4 => s.len() as u32 - 3,
            2 => s.len() as u32 / 2 - 1,
            _ => 0,
        };
        let reps: BTreeSet<Label> = (0..4).map(|x| coset_rep(x, &h)).collect();
        for r in reps {
            genus.push(gen);
            vertex_keys.push((c, r));
        }
        subgroups.push(h);
    }
    let index = |c: usize, r: Label| {
        vertex_keys
            .iter()
            .position(|&k| k == (c, r))
            .expect("coset vertex exists")
    };
    let mut edges = Vec::new();
    let mut node_keys = Vec::new();
    for (i, &(a, b)) in t.edges.iter().enumerate() {
        let stab = generated_subgroup(&[g.edge_labels[i]]);
        let reps: BTreeSet<Label> = (0..4).map(|x| coset_rep(x, &stab)).collect();
        for r in reps {
            let u = index(a, coset_rep(r, &subgroups[a]));
            let v = index(b, coset_rep(r, &subgroups[b]));
            edges.push((u, v));
            node_keys.push((i, r));
        }
    }
    let graph = StableCurveGraph { genus, edges };
    let total = graph.arithmetic_genus();
    if total != 3 {
        return Err(Error::GenusMismatch(total));
    }
    Ok(CoverData {
        graph,
        vertex_keys,
        node_keys,
    })
}

/// The V-cover of a decorated graph, before stabilisation.
pub fn admissible_cover(g: &DecoratedGraph) -> Result<StableCurveGraph> {
    admissible_cover_data(g).map(|d| d.graph)
}

/// Contract genus-0 vertices of degree at most 2.
pub fn stabilize(s: &StableCurveGraph) -> StableCurveGraph {
    let mut genus = s.genus.clone();
    let mut edges = s.edges.clone();
    loop {
        let tmp = StableCurveGraph {
            genus: genus.clone(),
            edges: edges.clone(),
        };
        let victim = (0..genus.len())
            .find(|&v| genus[v] == 0 && tmp.degree(v) <= 2 && !edges.iter().any(|&(a, b)| a == v && b == v));
        let Some(v) = victim else { break };
        let incident: Vec<usize> = (0..edges.len())
            .filter(|&i| edges[i].0 == v || edges[i].1 == v)
            .collect();
        let others: Vec<usize> = incident
            .iter()
            .map(|&i| if edges[i].0 == v { edges[i].1 } else { edges[i].0 })
            .collect();
        for &i in incident.iter().rev() {
            edges.remove(i);
        }
        if others.len() == 2 {
            edges.push((others[0], others[1]));
        }
        genus.remove(v);
        for e in edges.iter_mut() {
            if e.0 > v {
                e.0 -= 1;
            }
            if e.1 > v {
                e.1 -= 1;
            }
        }
    }
    StableCurveGraph { genus, edges }
}

pub fn stable_graph_of(t: &MarkedTree) -> Result<StableCurveGraph> {
    Ok(stabilize(&admissible_cover(&edge_labels(t))?))
}

/// Reference graphs for the thirteen stable types, one per name.
///
/// Each graph is produced by the cover pipeline from a representative whose
/// listed name is undisputed.
pub fn catalog() -> &'static [(StableType, StableCurveGraph)] {
    static CATALOG: OnceLock<Vec<(StableType, StableCurveGraph)>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        [
            (StableType::Good, G::I),
            (StableType::Candy, G::II1),
            (StableType::DNA, G::II2),
            (StableType::Loop, G::II3),
            (StableType::Lop, G::II4),
            (StableType::Looop, G::III2),
            (StableType::Tree, G::III5),
            (StableType::WinkyCat, G::III6),
            (StableType::Cave, G::III7),
            (StableType::GrlPwr, G::IV1),
            (StableType::Garden, G::IV2),
            (StableType::Cat, G::IV3),
            (StableType::Braid, G::IVs1),
        ]
        .into_iter()
        .map(|(t, g)| {
            (
                t,
                stable_graph_of(&g.representative()).expect("representatives are valid"),
            )
        })
        .collect()
    })
}

pub fn type_name(s: &StableCurveGraph) -> Result<StableType> {
    catalog()
        .iter()
        .find(|(_, c)| c.is_isomorphic(s))
        .map(|(t, _)| *t)
        .ok_or(Error::UnknownType)
}

fn spanning_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    let all: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    let k = n.saturating_sub(1);
    for mask in 0u32..(1 << all.len()) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let edges: Vec<_> = (0..all.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| all[i])
            .collect();
        let t = MarkedTree {
            components: n,
            edges: edges.clone(),
            marks: Vec::new(),
        };
        if t.is_tree() {
            out.push(edges);
        }
    }
    out
}

/// All decorated graphs up to isomorphism, one representative per class.
///
/// Stability bounds the number of components by four, so this search is
/// exhaustive.
pub fn enumerate_decorated() -> Vec<DecoratedGraph> {
    const LABELS: [Label; 6] = [1, 1, 2, 2, 3, 3];
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
    let mut out = Vec::new();
    for n in 1..=4usize {
        for edges in spanning_trees(n) {
            for code in 0..n.pow(6) {
                let mut c = code;
                let marks: Vec<(usize, Label)> = LABELS
                    .iter()
                    .map(|&l| {
                        let comp = c % n;
                        c /= n;
                        (comp, l)
                    })
                    .collect();
                let t = MarkedTree {
                    components: n,
                    edges: edges.clone(),
                    marks,
                };
                if !t.is_stable() {
                    continue;
                }
                if seen.insert(t.canonical_form()) {
                    out.push(edge_labels(&t));
                }
            }
        }
    }
    out
}
