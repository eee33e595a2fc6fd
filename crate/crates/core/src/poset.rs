//! Finite posets and the comparable-pair basis of their incidence algebra.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Default cap on the number of poset elements.
pub const DEFAULT_MAX_ELEMENTS: usize = 64;

/// A finite partially ordered set together with the indexed list of its
/// comparable pairs `(x, y)`, `x <= y`.
///
/// Elements are referred to by their position in [`Poset::names`]. The
/// pair list is sorted by (topological rank of `x`, topological rank of
/// `y`) and is the basis order used everywhere else in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    by_name: HashMap<String, usize>,
    leq: Vec<bool>,
    rank: Vec<usize>,
    pairs: Vec<(usize, usize)>,
    pair_index: Vec<Option<usize>>,
    // for the pair (x, y): every (pair(x, z), pair(z, y)) with x <= z <= y
    factorizations: Vec<Vec<(usize, usize)>>,
    component: Vec<usize>,
    component_count: usize,
}

impl Poset {
    /// Builds the poset generated by `relations` (each `(a, b)` meaning
    /// `a < b`) as a reflexive-transitive closure.
    pub fn from_relations(names: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        Self::from_relations_capped(names, relations, DEFAULT_MAX_ELEMENTS)
    }

    pub fn from_relations_capped(
        names: Vec<String>,
        relations: &[(usize, usize)],
        cap: usize,
    ) -> Result<Self> {
        let n = names.len();
        if n > cap {
            return Err(Error::PosetTooLarge { size: n, cap });
        }
        let mut by_name = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if by_name.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateElement(name.clone()));
            }
        }
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in relations {
            assert!(a < n && b < n, "relation index out of range");
            if a == b {
                return Err(Error::NotPartialOrder(format!(
                    "`{0} < {0}` is not irreflexive",
                    names[a]
                )));
            }
            leq[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::NotPartialOrder(format!(
                        "cycle through `{}` and `{}`",
                        names[i], names[j]
                    )));
                }
            }
        }
        Ok(Self::assemble(names, by_name, leq))
    }

    fn assemble(names: Vec<String>, by_name: HashMap<String, usize>, leq: Vec<bool>) -> Self {
        let n = names.len();
        // Kahn's algorithm, always taking the earliest listed minimal element.
        let mut rank = vec![usize::MAX; n];
        let mut indegree: Vec<usize> = (0..n)
            .map(|j| (0..n).filter(|&i| i != j && leq[i * n + j]).count())
            .collect();
        for r in 0..n {
            let next = (0..n)
                .find(|&i| rank[i] == usize::MAX && indegree[i] == 0)
                .expect("acyclic relation has a minimal element");
            rank[next] = r;
            for j in 0..n {
                if j != next && leq[next * n + j] {
                    indegree[j] -= 1;
                }
            }
        }
        let mut by_rank = vec![0; n];
        for (i, &r) in rank.iter().enumerate() {
            by_rank[r] = i;
        }

        let mut pairs = Vec::new();
        for &x in &by_rank {
            for &y in &by_rank {
                if leq[x * n + y] {
                    pairs.push((x, y));
                }
            }
        }
        let mut pair_index = vec![None; n * n];
        for (p, &(x, y)) in pairs.iter().enumerate() {
            pair_index[x * n + y] = Some(p);
        }
        let factorizations = pairs
            .iter()
            .map(|&(x, y)| {
                by_rank
                    .iter()
                    .filter(|&&z| leq[x * n + z] && leq[z * n + y])
                    .map(|&z| {
                        (
                            pair_index[x * n + z].unwrap(),
                            pair_index[z * n + y].unwrap(),
                        )
                    })
                    .collect()
            })
            .collect();

        let mut component = vec![usize::MAX; n];
        let mut component_count = 0;
        for start in 0..n {
            if component[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            component[start] = component_count;
            while let Some(i) = stack.pop() {
                for j in 0..n {
                    if component[j] == usize::MAX && (leq[i * n + j] || leq[j * n + i]) {
                        component[j] = component_count;
                        stack.push(j);
                    }
                }
            }
            component_count += 1;
        }

        Poset {
            names,
            by_name,
            leq,
            rank,
            pairs,
            pair_index,
            factorizations,
            component,
            component_count,
        }
    }

    /// Parses the poset text format: the first non-comment line lists the
    /// element names, every further line is a relation `a < b`.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_capped(text, DEFAULT_MAX_ELEMENTS)
    }

    pub fn parse_capped(text: &str, cap: usize) -> Result<Self> {
        let mut names: Option<Vec<String>> = None;
        let mut lookup: HashMap<String, usize> = HashMap::new();
        let mut relations = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let line_no = lineno + 1;
            match names {
                None => {
                    let list: Vec<String> = line.split_whitespace().map(str::to_string).collect();
                    for (i, name) in list.iter().enumerate() {
                        if name.contains('<') {
                            return Err(Error::parse(line_no, "element names may not contain `<`"));
                        }
                        if lookup.insert(name.clone(), i).is_some() {
                            return Err(Error::DuplicateElement(name.clone()));
                        }
                    }
                    names = Some(list);
                }
                Some(_) => {
                    let (a, b) = line
                        .split_once('<')
                        .ok_or_else(|| Error::parse(line_no, format!("expected `a < b`, got `{line}`")))?;
                    let (a, b) = (a.trim(), b.trim());
                    if a.is_empty() || b.is_empty() || b.contains('<') || a.contains(char::is_whitespace) || b.contains(char::is_whitespace) {
                        return Err(Error::parse(line_no, format!("expected `a < b`, got `{line}`")));
                    }
                    let ia = *lookup.get(a).ok_or_else(|| Error::UnknownElement(a.to_string()))?;
                    let ib = *lookup.get(b).ok_or_else(|| Error::UnknownElement(b.to_string()))?;
                    relations.push((ia, ib));
                }
            }
        }
        let names = names.ok_or_else(|| Error::parse(0, "missing element line"))?;
        Self::from_relations_capped(names, &relations, cap)
    }

    /// Writes the poset in the text format, listing cover relations only.
    pub fn to_text(&self) -> String {
        let mut out = self.names.join(" ");
        out.push('\n');
        for (x, y) in self.covers() {
            let _ = writeln!(out, "{} < {}", self.names[x], self.names[y]);
        }
        out
    }

    fn numbered(n: usize) -> Vec<String> {
        (1..=n).map(|i| i.to_string()).collect()
    }

    /// `1 < 2 < ... < n`.
    pub fn chain(n: usize) -> Self {
        let rel: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_relations(Self::numbered(n), &rel).expect("chain is a partial order")
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_relations(Self::numbered(n), &[]).expect("antichain is a partial order")
    }

    /// `1 < {2, 3} < 4`.
    pub fn diamond() -> Self {
        Self::from_relations(Self::numbered(4), &[(0, 1), (0, 2), (1, 3), (2, 3)])
            .expect("diamond is a partial order")
    }

    /// The N-shaped poset `1 < 3`, `2 < 3`, `2 < 4`.
    pub fn n_shape() -> Self {
        Self::from_relations(Self::numbered(4), &[(0, 2), (1, 2), (1, 3)])
            .expect("N is a partial order")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    /// `x <= y`, by element index.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.len() + y]
    }

    /// `x < y`, by element index.
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn is_leq(&self, x: &str, y: &str) -> Result<bool> {
        Ok(self.leq(self.index_of(x)?, self.index_of(y)?))
    }

    /// All `z` with `x <= z <= y`, in element order.
    pub fn interval(&self, x: usize, y: usize) -> Result<Vec<usize>> {
        if !self.leq(x, y) {
            return Err(Error::EmptyInterval(self.names[x].clone(), self.names[y].clone()));
        }
        Ok((0..self.len())
            .filter(|&z| self.leq(x, z) && self.leq(z, y))
            .collect())
    }

    pub fn interval_by_name(&self, x: &str, y: &str) -> Result<Vec<String>> {
        let ids = self.interval(self.index_of(x)?, self.index_of(y)?)?;
        Ok(ids.into_iter().map(|i| self.names[i].clone()).collect())
    }

    pub fn topological_rank(&self, x: usize) -> usize {
        self.rank[x]
    }

    /// The comparable pairs in basis order.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Number of comparable pairs: the rank of the incidence algebra.
    pub fn basis_len(&self) -> usize {
        self.pairs.len()
    }

    pub fn pair(&self, p: usize) -> (usize, usize) {
        self.pairs[p]
    }

    pub fn pair_index(&self, x: usize, y: usize) -> Option<usize> {
        self.pair_index[x * self.len() + y]
    }

    pub(crate) fn factorizations(&self, p: usize) -> &[(usize, usize)] {
        &self.factorizations[p]
    }

    /// Pair indices of the diagonal pairs `(x, x)`, indexed by element.
    pub fn diagonal_pairs(&self) -> Vec<usize> {
        (0..self.len()).map(|x| self.pair_index(x, x).unwrap()).collect()
    }

    /// Strict comparabilities `x < y`.
    pub fn strict_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied().filter(|&(x, y)| x != y)
    }

    /// `x < y` with nothing strictly in between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.strict_pairs()
            .filter(|&(x, y)| !(0..self.len()).any(|z| self.lt(x, z) && self.lt(z, y)))
            .collect()
    }

    /// Connected component of each element in the comparability graph.
    pub fn component(&self, x: usize) -> usize {
        self.component[x]
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }
}
