//! Finite posets, ordered subsets, bounds, closures and the Möbius function.
//!
//! A [`FinitePoset`] stores its carrier in a fixed linear extension, so element
//! indices double as positions in that extension: `leq(a, b)` with `a != b`
//! always implies `a < b`. Every algorithm below leans on that.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Label of a carrier element. Any non-whitespace token.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementId(String);

impl ElementId {
    pub fn new(label: impl Into<String>) -> Self {
        ElementId(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ElementId {
    fn from(s: &str) -> Self {
        ElementId(s.to_string())
    }
}

impl From<String> for ElementId {
    fn from(s: String) -> Self {
        ElementId(s)
    }
}

impl From<&String> for ElementId {
    fn from(s: &String) -> Self {
        ElementId(s.clone())
    }
}

impl From<&ElementId> for ElementId {
    fn from(s: &ElementId) -> Self {
        s.clone()
    }
}

macro_rules! element_id_from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for ElementId {
            fn from(n: $t) -> Self {
                ElementId(n.to_string())
            }
        }
    )*};
}
element_id_from_int!(u32, u64, i32, i64, usize);

/// A finite partially ordered set with its full order table.
#[derive(Debug, Clone)]
pub struct FinitePoset {
    ids: Vec<ElementId>,
    index: HashMap<ElementId, usize>,
    /// Row-major `n * n` table of the reflexive order.
    leq: Vec<bool>,
    mobius: OnceLock<Vec<BigInt>>,
}

impl PartialEq for FinitePoset {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.leq == other.leq
    }
}

impl Eq for FinitePoset {}

/// Builds the poset whose order is the reflexive-transitive closure of
/// `relations`. The carrier is reordered into a linear extension by a stable
/// topological sort that breaks ties by declaration order.
pub fn build_poset<E, R>(elements: E, relations: R) -> Result<FinitePoset>
where
    E: IntoIterator,
    E::Item: Into<ElementId>,
    R: IntoIterator<Item = (ElementId, ElementId)>,
{
    let ids: Vec<ElementId> = elements.into_iter().map(Into::into).collect();
    if ids.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut index = HashMap::with_capacity(ids.len());
    for (i, id) in ids.iter().enumerate() {
        if index.insert(id.clone(), i).is_some() {
            return Err(Error::DuplicateElement(id.to_string()));
        }
    }
    let n = ids.len();
    let mut reach = vec![false; n * n];
    for i in 0..n {
        reach[i * n + i] = true;
    }
    for (a, b) in relations {
        let ia = *index
            .get(&a)
            .ok_or_else(|| Error::UnknownElement(a.to_string()))?;
        let ib = *index
            .get(&b)
            .ok_or_else(|| Error::UnknownElement(b.to_string()))?;
        reach[ia * n + ib] = true;
    }
    FinitePoset::from_reach(ids, reach, true)
}

impl FinitePoset {
    /// `reach` is a reflexive relation table indexed like `ids`. When
    /// `close` is set its transitive closure is taken first.
    fn from_reach(ids: Vec<ElementId>, mut reach: Vec<bool>, close: bool) -> Result<Self> {
        let n = ids.len();
        if close {
            for k in 0..n {
                for i in 0..n {
                    if !reach[i * n + k] {
                        continue;
                    }
                    for j in 0..n {
                        if reach[k * n + j] {
                            reach[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if reach[i * n + j] && reach[j * n + i] {
                    return Err(Error::Cycle(ids[i].to_string(), ids[j].to_string()));
                }
            }
        }

        // Kahn's algorithm on the strict order; the ready set is keyed by
        // declaration index so ties resolve in input order.
        let mut indegree: Vec<usize> = (0..n)
            .map(|j| (0..n).filter(|&i| i != j && reach[i * n + j]).count())
            .collect();
        let mut ready: BTreeSet<usize> = (0..n).filter(|&j| indegree[j] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = ready.pop_first() {
            order.push(i);
            for j in 0..n {
                if j != i && reach[i * n + j] {
                    indegree[j] -= 1;
                    if indegree[j] == 0 {
                        ready.insert(j);
                    }
                }
            }
        }
        debug_assert_eq!(order.len(), n);

        let sorted_ids: Vec<ElementId> = order.iter().map(|&i| ids[i].clone()).collect();
        let mut leq = vec![false; n * n];
        for (a, &ia) in order.iter().enumerate() {
            for (b, &ib) in order.iter().enumerate() {
                leq[a * n + b] = reach[ia * n + ib];
            }
        }
        let index = sorted_ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        Ok(FinitePoset {
            ids: sorted_ids,
            index,
            leq,
            mobius: OnceLock::new(),
        })
    }

    /// Builds a poset from a complete order predicate, e.g. divisibility.
    /// The predicate is closed transitively and validated like any other input.
    pub fn from_order_fn<F>(ids: Vec<ElementId>, leq: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> bool,
    {
        if ids.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut seen = HashSet::with_capacity(ids.len());
        for id in &ids {
            if !seen.insert(id) {
                return Err(Error::DuplicateElement(id.to_string()));
            }
        }
        let n = ids.len();
        let mut reach = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                reach[i * n + j] = i == j || leq(i, j);
            }
        }
        Self::from_reach(ids, reach, true)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Carrier in linear-extension order.
    pub fn ids(&self) -> &[ElementId] {
        &self.ids
    }

    pub fn id(&self, idx: usize) -> &ElementId {
        &self.ids[idx]
    }

    pub fn index_of(&self, id: &ElementId) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownElement(id.to_string()))
    }

    pub fn lookup(&self, id: impl Into<ElementId>) -> Result<usize> {
        self.index_of(&id.into())
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    /// Elements above every member of `set`, in carrier order.
    pub fn upper_bounds(&self, set: &[usize]) -> Vec<usize> {
        (0..self.len())
            .filter(|&z| set.iter().all(|&a| self.leq(a, z)))
            .collect()
    }

    /// Elements below every member of `set`, in carrier order.
    pub fn lower_bounds(&self, set: &[usize]) -> Vec<usize> {
        (0..self.len())
            .filter(|&z| set.iter().all(|&a| self.leq(z, a)))
            .collect()
    }

    fn describe(&self, set: &[usize]) -> String {
        let labels: Vec<&str> = set.iter().map(|&i| self.ids[i].as_str()).collect();
        format!("{{{}}}", labels.join(", "))
    }

    /// Least upper bound of `set`. A least element of the upper bounds, if
    /// any, comes first in the linear extension, so only that candidate is
    /// checked.
    pub fn join_of(&self, set: &[usize]) -> Result<usize> {
        let ub = self.upper_bounds(set);
        match ub.first() {
            Some(&c) if ub.iter().all(|&z| self.leq(c, z)) => Ok(c),
            _ => Err(Error::NoBound {
                kind: "join",
                elements: self.describe(set),
            }),
        }
    }

    /// Greatest lower bound of `set`.
    pub fn meet_of(&self, set: &[usize]) -> Result<usize> {
        let lb = self.lower_bounds(set);
        match lb.last() {
            Some(&c) if lb.iter().all(|&z| self.leq(z, c)) => Ok(c),
            _ => Err(Error::NoBound {
                kind: "meet",
                elements: self.describe(set),
            }),
        }
    }

    pub fn join(&self, a: usize, b: usize) -> Result<usize> {
        self.join_of(&[a, b])
    }

    pub fn meet(&self, a: usize, b: usize) -> Result<usize> {
        self.meet_of(&[a, b])
    }

    /// Join by label.
    pub fn join_ids(&self, a: &ElementId, b: &ElementId) -> Result<&ElementId> {
        let j = self.join(self.index_of(a)?, self.index_of(b)?)?;
        Ok(self.id(j))
    }

    /// Meet by label.
    pub fn meet_ids(&self, a: &ElementId, b: &ElementId) -> Result<&ElementId> {
        let m = self.meet(self.index_of(a)?, self.index_of(b)?)?;
        Ok(self.id(m))
    }

    fn mobius_table(&self) -> &[BigInt] {
        self.mobius.get_or_init(|| {
            let n = self.len();
            let mut table = vec![BigInt::zero(); n * n];
            for a in 0..n {
                table[a * n + a] = BigInt::one();
                for b in (a + 1)..n {
                    if !self.leq(a, b) {
                        continue;
                    }
                    // Every z with a <= z < b sits in a..b of the extension.
                    let mut acc = BigInt::zero();
                    for z in a..b {
                        if self.leq(a, z) && self.leq(z, b) {
                            acc += &table[a * n + z];
                        }
                    }
                    table[a * n + b] = -acc;
                }
            }
            table
        })
    }

    /// Möbius function of this poset, `mu(a, b)`. Zero when `a` is not below `b`.
    pub fn mobius(&self, a: usize, b: usize) -> &BigInt {
        &self.mobius_table()[a * self.len() + b]
    }

    /// The subposet on `members`, which must already be listed in a linear
    /// extension order (any increasing index sequence is).
    pub fn induced(&self, members: &[usize]) -> FinitePoset {
        let ids: Vec<ElementId> = members.iter().map(|&i| self.ids[i].clone()).collect();
        let k = members.len();
        let mut leq = vec![false; k * k];
        for (a, &ia) in members.iter().enumerate() {
            for (b, &ib) in members.iter().enumerate() {
                leq[a * k + b] = self.leq(ia, ib);
            }
        }
        let index = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        FinitePoset {
            ids,
            index,
            leq,
            mobius: OnceLock::new(),
        }
    }

    /// Pairs `(a, b)` where `b` covers `a`.
    pub fn cover_relations(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut covers = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                if self.leq(a, b) && !((a + 1)..b).any(|c| self.leq(a, c) && self.leq(c, b)) {
                    covers.push((a, b));
                }
            }
        }
        covers
    }

    /// Checks that the carrier order is a linear extension of the relation.
    pub fn carrier_is_linear_extension(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| (0..a).all(|b| !self.leq(a, b)))
    }

    /// Serializes to the line format read by [`parse_poset`], listing cover
    /// relations only.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for id in &self.ids {
            out.push_str("elem ");
            out.push_str(id.as_str());
            out.push('\n');
        }
        for (a, b) in self.cover_relations() {
            out.push_str(&format!("rel {} {}\n", self.ids[a], self.ids[b]));
        }
        out
    }
}

/// Parses the line format: `elem <id>` declares an element, `rel <a> <b>`
/// declares `a <= b`. Blank lines and `#` comments are ignored.
pub fn parse_poset(text: &str) -> Result<FinitePoset> {
    let mut elements = Vec::new();
    let mut relations = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: lineno + 1,
            message,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["elem", id] => elements.push(ElementId::from(*id)),
            ["rel", a, b] => relations.push((ElementId::from(*a), ElementId::from(*b))),
            ["elem", ..] => return Err(err("expected `elem <id>`".into())),
            ["rel", ..] => return Err(err("expected `rel <a> <b>`".into())),
            [other, ..] => return Err(err(format!("unknown directive `{other}`"))),
            [] => unreachable!(),
        }
    }
    build_poset(elements, relations)
}

/// A sequence of distinct carrier elements whose order is compatible with the
/// poset: `x_i <= x_j` implies `i <= j`.
#[derive(Debug, Clone)]
pub struct OrderedSubset {
    poset: Arc<FinitePoset>,
    members: Vec<usize>,
}

impl PartialEq for OrderedSubset {
    fn eq(&self, other: &Self) -> bool {
        self.same_poset(other) && self.members == other.members
    }
}

impl Eq for OrderedSubset {}

impl OrderedSubset {
    /// Members in the given order; fails if that order contradicts the poset.
    pub fn new<I>(poset: &Arc<FinitePoset>, ids: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: Into<ElementId>,
    {
        let members = ids
            .into_iter()
            .map(|id| poset.index_of(&id.into()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(poset, members)
    }

    /// Members re-sorted into carrier order.
    pub fn sorted<I>(poset: &Arc<FinitePoset>, ids: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: Into<ElementId>,
    {
        let mut members = ids
            .into_iter()
            .map(|id| poset.index_of(&id.into()))
            .collect::<Result<Vec<_>>>()?;
        check_distinct(poset, &members)?;
        members.sort_unstable();
        Ok(OrderedSubset {
            poset: Arc::clone(poset),
            members,
        })
    }

    pub fn from_indices(poset: &Arc<FinitePoset>, members: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = members.iter().find(|&&i| i >= poset.len()) {
            return Err(Error::UnknownElement(format!("#{bad}")));
        }
        check_distinct(poset, &members)?;
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[..i] {
                if poset.leq(a, b) {
                    return Err(Error::OrderViolation {
                        earlier: poset.id(b).to_string(),
                        later: poset.id(a).to_string(),
                    });
                }
            }
        }
        Ok(OrderedSubset {
            poset: Arc::clone(poset),
            members,
        })
    }

    /// Caller guarantees distinct, increasing indices.
    pub(crate) fn from_sorted(poset: &Arc<FinitePoset>, members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        OrderedSubset {
            poset: Arc::clone(poset),
            members,
        }
    }

    /// The whole carrier.
    pub fn whole(poset: &Arc<FinitePoset>) -> Self {
        Self::from_sorted(poset, (0..poset.len()).collect())
    }

    pub fn poset(&self) -> &Arc<FinitePoset> {
        &self.poset
    }

    pub fn same_poset(&self, other: &OrderedSubset) -> bool {
        Arc::ptr_eq(&self.poset, &other.poset) || *self.poset == *other.poset
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Carrier indices of the members, in subset order.
    pub fn indices(&self) -> &[usize] {
        &self.members
    }

    pub fn ids(&self) -> Vec<&ElementId> {
        self.members.iter().map(|&i| self.poset.id(i)).collect()
    }

    pub fn id(&self, k: usize) -> &ElementId {
        self.poset.id(self.members[k])
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.members.contains(&idx)
    }

    /// Position of carrier index `idx` within the subset.
    pub fn position(&self, idx: usize) -> Option<usize> {
        self.members.iter().position(|&m| m == idx)
    }

    /// The subposet on the members, in subset order.
    pub fn induced_poset(&self) -> FinitePoset {
        self.poset.induced(&self.members)
    }

    /// The subset with the `k`th member removed.
    pub fn without(&self, k: usize) -> OrderedSubset {
        let mut members = self.members.clone();
        members.remove(k);
        OrderedSubset {
            poset: Arc::clone(&self.poset),
            members,
        }
    }

    /// Same members, sorted into carrier order.
    pub fn canonical(&self) -> OrderedSubset {
        let mut members = self.members.clone();
        members.sort_unstable();
        OrderedSubset::from_sorted(&self.poset, members)
    }

    /// Whether both subsets hold the same members, ignoring order.
    pub fn same_members(&self, other: &OrderedSubset) -> bool {
        self.same_poset(other) && self.canonical().members == other.canonical().members
    }

    /// `∨S`, the join of all members.
    pub fn supremum(&self) -> Result<usize> {
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        self.poset.join_of(&self.members)
    }
}

fn check_distinct(poset: &FinitePoset, members: &[usize]) -> Result<()> {
    let mut seen = HashSet::with_capacity(members.len());
    for &m in members {
        if !seen.insert(m) {
            return Err(Error::DuplicateElement(poset.id(m).to_string()));
        }
    }
    Ok(())
}

/// `<S>`: the smallest superset of `s` closed under pairwise joins, in
/// carrier order.
pub fn join_closure(s: &OrderedSubset) -> Result<OrderedSubset> {
    let poset = s.poset();
    let mut set: BTreeSet<usize> = s.indices().iter().copied().collect();
    let mut frontier: Vec<usize> = set.iter().copied().collect();
    while !frontier.is_empty() {
        let snapshot: Vec<usize> = set.iter().copied().collect();
        let mut fresh = Vec::new();
        for &a in &frontier {
            for &b in &snapshot {
                let j = poset.join(a, b)?;
                if !set.contains(&j) && !fresh.contains(&j) {
                    fresh.push(j);
                }
            }
        }
        set.extend(fresh.iter().copied());
        frontier = fresh;
    }
    Ok(OrderedSubset::from_sorted(poset, set.into_iter().collect()))
}

/// `P_S`: every carrier element lying in some interval `[x_i, ∨S]`, in
/// carrier order.
pub fn upper_part(s: &OrderedSubset) -> Result<OrderedSubset> {
    let poset = s.poset();
    let top = s.supremum()?;
    let members = (0..poset.len())
        .filter(|&y| poset.leq(y, top) && s.indices().iter().any(|&x| poset.leq(x, y)))
        .collect();
    Ok(OrderedSubset::from_sorted(poset, members))
}

/// Closure properties of a subset relative to its host poset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClosureFlags {
    pub is_meet_closed: bool,
    pub is_join_closed: bool,
    pub is_lower_closed: bool,
    pub is_upper_closed: bool,
    pub is_upper_closed_up_to_join: bool,
}

pub fn closure_predicates(s: &OrderedSubset) -> ClosureFlags {
    let poset = s.poset();
    let members = s.indices();
    let inside = |r: Result<usize>| r.map(|z| s.contains(z)).unwrap_or(false);
    let pairs = || {
        members
            .iter()
            .enumerate()
            .flat_map(move |(i, &a)| members[i..].iter().map(move |&b| (a, b)))
    };
    let is_meet_closed = pairs().all(|(a, b)| inside(poset.meet(a, b)));
    let is_join_closed = pairs().all(|(a, b)| inside(poset.join(a, b)));
    let is_lower_closed = members
        .iter()
        .all(|&x| (0..poset.len()).all(|y| !poset.leq(y, x) || s.contains(y)));
    let is_upper_closed = members
        .iter()
        .all(|&x| (0..poset.len()).all(|y| !poset.leq(x, y) || s.contains(y)));
    let is_upper_closed_up_to_join = match s.supremum() {
        Ok(top) => members.iter().all(|&x| {
            (0..poset.len()).all(|y| !(poset.leq(x, y) && poset.leq(y, top)) || s.contains(y))
        }),
        Err(_) => false,
    };
    ClosureFlags {
        is_meet_closed,
        is_join_closed,
        is_lower_closed,
        is_upper_closed,
        is_upper_closed_up_to_join,
    }
}

/// Möbius function by label.
pub fn mobius(p: &FinitePoset, a: &ElementId, b: &ElementId) -> Result<BigInt> {
    Ok(p.mobius(p.index_of(a)?, p.index_of(b)?).clone())
}
