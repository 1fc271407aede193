//! Relations on Ω and their graphs.
//!
//! Two distinct lines [U], [V] with unit representatives are related by the
//! unordered class {c, -c} of c = U·V. Since Q(U ± V) = 2 ± 2c, this is the
//! same as the unordered value pair {Q(U+V), Q(U-V)} = {2 + α, 2 - α} with
//! α = 2c, and it does not depend on which representatives are picked.
//!
//! Relation indices follow the tables for odd and even dimension:
//!
//! * d odd: α_1 = -2, α_i = 2ν^{-(i-1)} for 2 ≤ i ≤ (q-1)/2, α_{(q+1)/2} = 0.
//! * d even: α_i = 2^{-1}ν^i for 1 ≤ i ≤ (q-1)/2, α_{(q+1)/2} = 0.
//!
//! Indices are only meaningful relative to the pinned generator ν, which is
//! why every [`GraphHeader`] carries the field header.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{FieldElement, FieldHeader, FieldSpec};
use crate::geometry::{dot_unchecked, quad_form, LineRep, OmegaSet, PointVec};

/// Number of relations (excluding the identity): (q + 1) / 2.
pub fn relation_count(q: u32) -> usize {
    (q as usize).div_ceil(2)
}

/// A relation index i in 1..=(q+1)/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RelationIndex(usize);

impl RelationIndex {
    pub fn new(i: usize, q: u32) -> Result<Self> {
        let max = relation_count(q);
        if i == 0 || i > max {
            return Err(Error::RelationOutOfRange { i, max });
        }
        Ok(RelationIndex(i))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// All indices 1..=(q+1)/2.
    pub fn all(q: u32) -> impl Iterator<Item = RelationIndex> {
        (1..=relation_count(q)).map(RelationIndex)
    }
}

/// α_i together with the value pair {2 + α_i, 2 - α_i}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationValue {
    pub i: RelationIndex,
    pub alpha: FieldElement,
    /// Ascending; a single value when α_i = 0.
    pub pair: Vec<FieldElement>,
}

pub fn alpha_of(field: &FieldSpec, d: usize, i: usize) -> Result<RelationValue> {
    let index = RelationIndex::new(i, field.q())?;
    let top = relation_count(field.q());
    let nu = field.generator();
    let two = field.from_int(2);
    let alpha = if i == top {
        FieldElement::ZERO
    } else if d % 2 == 1 {
        if i == 1 {
            field.neg(two)
        } else {
            let nu_inv = field.inv(nu)?;
            field.mul(two, field.pow(nu_inv, (i - 1) as u64))
        }
    } else {
        field.mul(field.inv(two)?, field.pow(nu, i as u64))
    };
    let mut pair = vec![field.add(two, alpha), field.sub(two, alpha)];
    pair.sort();
    pair.dedup();
    Ok(RelationValue { i: index, alpha, pair })
}

/// Value pairs for every relation, in index order.
pub fn relation_values(field: &FieldSpec, d: usize) -> Vec<RelationValue> {
    RelationIndex::all(field.q())
        .map(|i| alpha_of(field, d, i.get()).expect("index in range"))
        .collect()
}

/// Lookup from a dot product U·V to its relation index.
#[derive(Clone, Debug)]
pub struct Classifier {
    by_dot: Vec<u16>,
}

impl Classifier {
    pub fn new(field: &FieldSpec, d: usize) -> Self {
        let half = field.inv(field.from_int(2)).expect("q is odd");
        let mut by_dot = vec![0u16; field.q() as usize];
        for rv in relation_values(field, d) {
            let c = field.mul(rv.alpha, half);
            by_dot[c.index() as usize] = rv.i.get() as u16;
            by_dot[field.neg(c).index() as usize] = rv.i.get() as u16;
        }
        debug_assert!(by_dot.iter().all(|&i| i > 0));
        Classifier { by_dot }
    }

    #[inline]
    pub fn relation_of_dot(&self, c: FieldElement) -> usize {
        self.by_dot[c.index() as usize] as usize
    }
}

/// Relation index of two distinct lines.
pub fn classify(field: &FieldSpec, d: usize, u: &LineRep, v: &LineRep) -> Result<RelationIndex> {
    classify_reps(field, d, u.rep(), v.rep())
}

/// Like [`classify`] but for arbitrary unit representatives of the two lines.
pub fn classify_reps(field: &FieldSpec, d: usize, u: &PointVec, v: &PointVec) -> Result<RelationIndex> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    if u == v || *u == v.neg(field) {
        return Err(Error::DiagonalPair);
    }
    let c = dot_unchecked(field, u, v);
    Ok(RelationIndex(Classifier::new(field, d).relation_of_dot(c)))
}

/// Identification of a relation graph, serialized at the top of graph and
/// spectrum files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphHeader {
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
    pub nu: Vec<u32>,
    pub q: u32,
    pub d: usize,
    pub i: usize,
    pub n: usize,
    pub valency: Option<usize>,
}

impl GraphHeader {
    pub fn field(&self) -> FieldHeader {
        FieldHeader {
            p: self.p,
            e: self.e,
            q: self.q,
            modulus: self.modulus.clone(),
            nu: self.nu.clone(),
        }
    }

    /// Whether this header describes the graph (field, d, i) regardless of
    /// the derived fields n and valency.
    pub fn same_key(&self, field: &FieldHeader, d: usize, i: usize) -> bool {
        self.field() == *field && self.d == d && self.i == i
    }
}

/// The graph (Ω, R_i).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeGraph {
    pub header: GraphHeader,
    adjacency: Vec<Vec<u32>>,
    edge_count: usize,
}

impl SchemeGraph {
    /// Builds a graph from neighbor lists, sorting them and checking that
    /// they describe a simple undirected graph.
    pub fn from_adjacency(field: &FieldHeader, d: usize, i: usize, mut adjacency: Vec<Vec<u32>>) -> Result<Self> {
        let n = adjacency.len();
        for (v, nb) in adjacency.iter_mut().enumerate() {
            nb.sort_unstable();
            nb.dedup();
            if let Some(&bad) = nb.iter().find(|&&u| u as usize >= n || u as usize == v) {
                return Err(Error::VertexOutOfRange { index: bad as usize, n });
            }
        }
        for (v, nb) in adjacency.iter().enumerate() {
            for &u in nb {
                if adjacency[u as usize].binary_search(&(v as u32)).is_err() {
                    return Err(Error::InvariantViolated(format!("edge ({v}, {u}) is not symmetric")));
                }
            }
        }
        let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        let valency = common_degree(&adjacency);
        let header = GraphHeader {
            p: field.p,
            e: field.e,
            modulus: field.modulus.clone(),
            nu: field.nu.clone(),
            q: field.q,
            d,
            i,
            n,
            valency,
        };
        Ok(SchemeGraph {
            header,
            adjacency,
            edge_count,
        })
    }

    /// Builds a graph on `n` vertices from an edge list.
    pub fn from_edges(field: &FieldHeader, d: usize, i: usize, n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w as usize >= n {
                    return Err(Error::VertexOutOfRange { index: w as usize, n });
                }
            }
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        Self::from_adjacency(field, d, i, adjacency)
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn relation(&self) -> usize {
        self.header.i
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// The common degree, if the graph is regular.
    pub fn valency(&self) -> Option<usize> {
        self.header.valency
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&(v as u32)).is_ok()
    }

    /// Edges (u, v) with u < v in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&&v| v as usize > u).map(move |&v| (u as u32, v)))
    }

    pub fn bits(&self) -> AdjacencyBits {
        AdjacencyBits::from_graph(self)
    }
}

fn common_degree(adjacency: &[Vec<u32>]) -> Option<usize> {
    let first = adjacency.first().map_or(0, Vec::len);
    adjacency.iter().all(|nb| nb.len() == first).then_some(first)
}

/// Packed symmetric bit matrix, one row of u64 words per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyBits {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl AdjacencyBits {
    /// Largest vertex count for which the packed form is built.
    pub const MAX_N: usize = 4096;

    fn from_graph(g: &SchemeGraph) -> Self {
        let n = g.n();
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; n * words];
        for (u, nb) in g.adjacency.iter().enumerate() {
            for &v in nb {
                bits[u * words + v as usize / 64] |= 1 << (v % 64);
            }
        }
        AdjacencyBits { n, words, bits }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, u: usize) -> usize {
        self.bits[u * self.words..(u + 1) * self.words]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }
}

/// Relation labels for every ordered pair of Ω, 0 on the diagonal.
#[derive(Clone, Debug)]
pub struct RelationTable {
    n: usize,
    relations: usize,
    labels: Vec<u16>,
}

impl RelationTable {
    pub fn build(field: &FieldSpec, omega: &OmegaSet) -> Self {
        let n = omega.len();
        let classifier = Classifier::new(field, omega.d);
        let mut labels = vec![0u16; n * n];
        let lines = omega.lines();
        for u in 0..n {
            for v in u + 1..n {
                let c = dot_unchecked(field, lines[u].rep(), lines[v].rep());
                let i = classifier.relation_of_dot(c) as u16;
                labels[u * n + v] = i;
                labels[v * n + u] = i;
            }
        }
        RelationTable {
            n,
            relations: relation_count(field.q()),
            labels,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn relations(&self) -> usize {
        self.relations
    }

    #[inline]
    pub fn label(&self, u: usize, v: usize) -> usize {
        self.labels[u * self.n + v] as usize
    }

    pub fn row(&self, u: usize) -> &[u16] {
        &self.labels[u * self.n..(u + 1) * self.n]
    }

    /// All relation graphs, index 1 first.
    pub fn graphs(&self, field: &FieldSpec, d: usize) -> Vec<SchemeGraph> {
        let header = field.header();
        let mut adj = vec![vec![Vec::new(); self.n]; self.relations];
        for (u, row) in self.labels.chunks_exact(self.n.max(1)).enumerate() {
            for (v, &i) in row.iter().enumerate() {
                if i > 0 {
                    adj[i as usize - 1][u].push(v as u32);
                }
            }
        }
        adj.into_iter()
            .enumerate()
            .map(|(k, a)| SchemeGraph::from_adjacency(&header, d, k + 1, a).expect("labels are symmetric"))
            .collect()
    }
}

/// Builds (Ω, R_i) directly from pairwise dot products.
pub fn graph_build(field: &FieldSpec, omega: &OmegaSet, i: RelationIndex) -> Result<SchemeGraph> {
    let classifier = Classifier::new(field, omega.d);
    let n = omega.len();
    let lines = omega.lines();
    let mut adjacency = vec![Vec::new(); n];
    for u in 0..n {
        for v in u + 1..n {
            if classifier.relation_of_dot(dot_unchecked(field, lines[u].rep(), lines[v].rep())) == i.get() {
                adjacency[u].push(v as u32);
                adjacency[v].push(u as u32);
            }
        }
    }
    SchemeGraph::from_adjacency(&field.header(), omega.d, i.get(), adjacency)
}

/// Outcome of [`partition_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub q: u32,
    pub d: usize,
    pub n: usize,
    pub relation_count: usize,
    pub edge_counts: Vec<usize>,
    pub pairs_total: usize,
    /// Distinct pairs whose value pair {Q(U+V), Q(U-V)} matched no relation
    /// or more than one.
    pub misclassified_pairs: usize,
    pub edge_sum_matches: bool,
    pub value_pairs_disjoint: bool,
    pub value_pairs_cover_field: bool,
    pub pass: bool,
}

/// Checks that the relations partition the distinct pairs of Ω and that the
/// value pairs {2 ± α_i} partition F_q.
///
/// Membership is decided here from Q(U + V) and Q(U - V) against each value
/// pair, independently of the dot-product classifier used to build graphs.
pub fn partition_check(field: &FieldSpec, omega: &OmegaSet, graphs: &[SchemeGraph]) -> PartitionReport {
    let values = relation_values(field, omega.d);
    let n = omega.len();
    let lines = omega.lines();

    let mut misclassified = 0;
    for u in 0..n {
        for v in u + 1..n {
            let (a, b) = (lines[u].rep(), lines[v].rep());
            let plus = quad_form(field, &a.add(field, b).expect("same dimension"));
            let minus = quad_form(field, &a.sub(field, b).expect("same dimension"));
            let matches = values
                .iter()
                .filter(|rv| rv.pair.contains(&plus) && rv.pair.contains(&minus))
                .count();
            let graph_hits = graphs.iter().filter(|g| g.has_edge(u, v)).count();
            if matches != 1 || graph_hits != 1 {
                misclassified += 1;
            }
        }
    }

    let edge_counts: Vec<usize> = graphs.iter().map(SchemeGraph::edge_count).collect();
    let pairs_total = n * n.saturating_sub(1) / 2;
    let edge_sum_matches = graphs.len() == values.len() && edge_counts.iter().sum::<usize>() == pairs_total;

    let mut hits = vec![0usize; field.q() as usize];
    for rv in &values {
        for v in &rv.pair {
            hits[v.index() as usize] += 1;
        }
    }
    let value_pairs_disjoint = hits.iter().all(|&h| h <= 1);
    let value_pairs_cover_field = hits.iter().all(|&h| h >= 1);

    PartitionReport {
        q: field.q(),
        d: omega.d,
        n,
        relation_count: values.len(),
        edge_counts,
        pairs_total,
        misclassified_pairs: misclassified,
        edge_sum_matches,
        value_pairs_disjoint,
        value_pairs_cover_field,
        pass: misclassified == 0 && edge_sum_matches && value_pairs_disjoint && value_pairs_cover_field,
    }
}

/// Order and valency of a regular relation graph, with the ratios against
/// q^{d-1}/2 and q^{d-2}.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Regularity {
    pub i: usize,
    pub n: usize,
    pub valency: usize,
    pub order_ratio: f64,
    pub valency_ratio: f64,
}

pub fn regular_check(graph: &SchemeGraph) -> Result<Regularity> {
    let n = graph.n();
    let degrees = (0..n).map(|v| graph.degree(v));
    let (min, max) = degrees.fold((usize::MAX, 0), |(lo, hi), k| (lo.min(k), hi.max(k)));
    if n > 0 && min != max {
        return Err(Error::Irregular {
            relation: graph.relation(),
            min,
            max,
        });
    }
    let valency = if n == 0 { 0 } else { max };
    let (q, d) = (graph.header.q as f64, graph.header.d as i32);
    Ok(Regularity {
        i: graph.relation(),
        n,
        valency,
        order_ratio: n as f64 / (q.powi(d - 1) / 2.0),
        valency_ratio: valency as f64 / q.powi(d - 2),
    })
}

/// Largest |Ω| accepted by [`scheme_axiom_check`].
pub const SCHEME_AXIOM_GUARD: usize = 2500;

/// Intersection numbers and the outcome of the association-scheme checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchemeAxiomReport {
    pub q: u32,
    pub d: usize,
    pub n: usize,
    pub relation_count: usize,
    pub symmetric: bool,
    pub constant: bool,
    /// intersection[k][i][j] = p_{ij}^k, with relation 0 the identity;
    /// `None` for every entry when R_k is empty.
    pub intersection: Vec<Vec<Vec<Option<u64>>>>,
    /// Pairs (u, v) whose count vector disagreed with the first pair seen in
    /// the same relation (at most 16 recorded).
    pub violations: Vec<(usize, usize)>,
    pub pass: bool,
}

/// Verifies symmetry of every relation and that p_{ij}^k depends only on
/// (i, j, k), by counting over all triples.
pub fn scheme_axiom_check(table: &RelationTable, q: u32, d: usize) -> Result<SchemeAxiomReport> {
    let n = table.n();
    if n > SCHEME_AXIOM_GUARD {
        return Err(Error::GuardExceeded {
            n,
            limit: SCHEME_AXIOM_GUARD,
        });
    }
    let r = table.relations() + 1;
    let symmetric = (0..n).all(|u| (0..n).all(|v| table.label(u, v) == table.label(v, u)));

    let mut reference: Vec<Option<Vec<u64>>> = vec![None; r];
    let mut violations = Vec::new();
    let mut violation_count = 0usize;
    let mut counts = vec![0u64; r * r];
    for u in 0..n {
        let row_u = table.row(u);
        for v in 0..n {
            counts.iter_mut().for_each(|c| *c = 0);
            // (w, v) read as (v, w); only valid when symmetric, which is
            // reported separately
            let row_v = table.row(v);
            for (&a, &b) in row_u.iter().zip(row_v) {
                counts[a as usize * r + b as usize] += 1;
            }
            let k = row_u[v] as usize;
            match &reference[k] {
                None => reference[k] = Some(counts.clone()),
                Some(expected) if *expected != counts => {
                    violation_count += 1;
                    if violations.len() < 16 {
                        violations.push((u, v));
                    }
                }
                Some(_) => {}
            }
        }
    }

    let intersection = reference
        .iter()
        .map(|slot| {
            (0..r)
                .map(|i| (0..r).map(|j| slot.as_ref().map(|c| c[i * r + j])).collect())
                .collect()
        })
        .collect();
    let constant = violation_count == 0;
    Ok(SchemeAxiomReport {
        q,
        d,
        n,
        relation_count: r - 1,
        symmetric,
        constant,
        intersection,
        violations,
        pass: symmetric && constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::omega_build;

    #[test]
    fn alpha_values() {
        let f5 = FieldSpec::prime(5).unwrap();
        let r3 = alpha_of(&f5, 3, 3).unwrap();
        assert_eq!((r3.alpha, r3.pair.clone()), (FieldElement::ZERO, vec![f5.from_int(2)]));
        let r2 = alpha_of(&f5, 3, 2).unwrap();
        assert_eq!(r2.alpha, f5.from_int(1));
        assert_eq!(r2.pair, vec![f5.from_int(1), f5.from_int(3)]);
        let r1 = alpha_of(&f5, 3, 1).unwrap();
        assert_eq!(r1.pair, vec![f5.from_int(0), f5.from_int(4)]);
        let e2 = alpha_of(&f5, 4, 2).unwrap();
        assert_eq!(e2.alpha, f5.from_int(2));
        assert_eq!(e2.pair, vec![f5.from_int(0), f5.from_int(4)]);
        assert_eq!(
            alpha_of(&f5, 3, 0).unwrap_err(),
            Error::RelationOutOfRange { i: 0, max: 3 }
        );
        assert_eq!(
            alpha_of(&f5, 3, 4).unwrap_err(),
            Error::RelationOutOfRange { i: 4, max: 3 }
        );
    }

    #[test]
    fn classify_examples() {
        let f3 = FieldSpec::prime(3).unwrap();
        let om = omega_build(&f3, 3).unwrap();
        assert_eq!(classify(&f3, 3, &om.lines()[0], &om.lines()[1]).unwrap().get(), 2);
        assert_eq!(
            classify(&f3, 3, &om.lines()[0], &om.lines()[0]).unwrap_err(),
            Error::DiagonalPair
        );

        let f5 = FieldSpec::prime(5).unwrap();
        let cls = Classifier::new(&f5, 3);
        for (dot, i) in [(2, 2), (3, 2), (1, 1), (4, 1), (0, 3)] {
            assert_eq!(cls.relation_of_dot(f5.from_int(dot)), i, "dot {dot}");
        }
    }

    #[test]
    fn q3_graphs() {
        let f3 = FieldSpec::prime(3).unwrap();
        let om = omega_build(&f3, 3).unwrap();
        let g2 = graph_build(&f3, &om, RelationIndex::new(2, 3).unwrap()).unwrap();
        assert_eq!((g2.n(), g2.valency(), g2.edge_count()), (3, Some(2), 3));
        let g1 = graph_build(&f3, &om, RelationIndex::new(1, 3).unwrap()).unwrap();
        assert_eq!((g1.valency(), g1.edge_count()), (Some(0), 0));
        assert_eq!(regular_check(&g2).unwrap().valency, 2);
        assert_eq!(regular_check(&g1).unwrap().valency, 0);

        let report = partition_check(&f3, &om, &[g1, g2]);
        assert!(report.pass, "{report:?}");
        assert_eq!(report.edge_counts, vec![0, 3]);
    }

    #[test]
    fn table_graphs_match_direct_build() {
        let f5 = FieldSpec::prime(5).unwrap();
        let om = omega_build(&f5, 3).unwrap();
        let table = RelationTable::build(&f5, &om);
        let graphs = table.graphs(&f5, 3);
        for g in &graphs {
            let direct = graph_build(&f5, &om, RelationIndex::new(g.relation(), 5).unwrap()).unwrap();
            assert_eq!(*g, direct);
        }
        for v in 0..om.len() {
            assert_eq!(graphs.iter().map(|g| g.degree(v)).sum::<usize>(), 14);
        }
        let report = partition_check(&f5, &om, &graphs);
        assert!(report.pass);
        let values: Vec<Vec<i64>> = relation_values(&f5, 3)
            .iter()
            .map(|rv| rv.pair.iter().map(|a| a.index() as i64).collect())
            .collect();
        assert_eq!(values, vec![vec![0, 4], vec![1, 3], vec![2]]);
    }

    #[test]
    fn bits_agree_with_lists() {
        let f5 = FieldSpec::prime(5).unwrap();
        let om = omega_build(&f5, 4).unwrap();
        for g in RelationTable::build(&f5, &om).graphs(&f5, 4) {
            let bits = g.bits();
            for u in 0..g.n() {
                assert_eq!(bits.degree(u), g.degree(u));
                for v in 0..g.n() {
                    assert_eq!(bits.has_edge(u, v), g.has_edge(u, v));
                }
            }
        }
    }

    #[test]
    fn irregular_graph_is_rejected() {
        let f3 = FieldSpec::prime(3).unwrap();
        let path = SchemeGraph::from_edges(&f3.header(), 3, 1, 3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(path.valency(), None);
        assert_eq!(
            regular_check(&path).unwrap_err(),
            Error::Irregular {
                relation: 1,
                min: 1,
                max: 2
            }
        );
        assert!(SchemeGraph::from_edges(&f3.header(), 3, 1, 3, &[(0, 3)]).is_err());
    }

    #[test]
    fn axioms_on_tiny_scheme() {
        let f3 = FieldSpec::prime(3).unwrap();
        let om = omega_build(&f3, 3).unwrap();
        let report = scheme_axiom_check(&RelationTable::build(&f3, &om), 3, 3).unwrap();
        assert!(report.pass);
        // p_{22}^2 = 1 in K_3, R_1 empty
        assert_eq!(report.intersection[2][2][2], Some(1));
        assert_eq!(report.intersection[1][0][0], None);
    }
}
