//! Connected clusters of viable genotypes under one-mutant adjacency.

use std::collections::{HashMap, HashSet};
use std::str::FromStr;

use crate::census::Census;
use crate::error::{Error, Result};

use super::hamming::viable_edges;
use super::rotation::rotation_classes;
use super::union_find::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusterMode {
    /// Vertices are raw viable sequences.
    Raw,
    /// Each rotation class is collapsed into a single vertex first.
    CollapsedRotations,
}

impl std::fmt::Display for ClusterMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ClusterMode::Raw => "raw",
            ClusterMode::CollapsedRotations => "collapsed-rotations",
        })
    }
}

impl FromStr for ClusterMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(ClusterMode::Raw),
            "collapsed-rotations" | "collapsed" => Ok(ClusterMode::CollapsedRotations),
            other => Err(Error::Usage(format!(
                "unknown cluster mode '{other}' (expected raw or collapsed-rotations)"
            ))),
        }
    }
}

/// One connected component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterComponent {
    /// Deterministic id: the smallest member rank.
    pub id: u64,
    pub representative: u64,
    /// Vertex count: sequences in raw mode, rotation classes when collapsed.
    pub size: u64,
    /// Distinct edges between the component's vertices.
    pub edge_count: u64,
    /// All raw member ranks, ascending.
    pub member_ranks: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterSet {
    pub mode: ClusterMode,
    /// Components ordered by size descending, ties by id ascending.
    pub components: Vec<ClusterComponent>,
}

impl ClusterSet {
    pub fn component(&self, id: u64) -> Result<&ClusterComponent> {
        self.components
            .iter()
            .find(|c| c.id == id)
            .ok_or(Error::UnknownComponent(id))
    }

    pub fn largest(&self) -> Option<&ClusterComponent> {
        self.components.first()
    }
}

/// Union-find over the pre-collected edge list; single-threaded and
/// deterministic.
pub fn find_clusters(census: &Census, mode: ClusterMode) -> ClusterSet {
    let count = census.viable_ranks.len();
    let edges = viable_edges(census);
    let mut uf = UnionFind::new(count);

    let class_index: Option<Vec<usize>> = match mode {
        ClusterMode::Raw => None,
        ClusterMode::CollapsedRotations => {
            let classes = rotation_classes(census);
            let by_rank = classes.class_index_by_rank();
            let per_member: Vec<usize> = census
                .viable_ranks
                .iter()
                .map(|rank| by_rank[rank])
                .collect();
            // Collapse each class to one vertex before adding mutation edges.
            let mut first_member: HashMap<usize, u32> = HashMap::new();
            for (member, &class) in per_member.iter().enumerate() {
                match first_member.entry(class) {
                    std::collections::hash_map::Entry::Occupied(e) => {
                        uf.union(*e.get(), member as u32);
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(member as u32);
                    }
                }
            }
            Some(per_member)
        }
    };

    for &(a, b) in &edges {
        uf.union(a, b);
    }

    // Group members by root.
    let mut members_by_root: HashMap<u32, Vec<usize>> = HashMap::new();
    for index in 0..count {
        members_by_root
            .entry(uf.find(index as u32))
            .or_default()
            .push(index);
    }

    let mut edge_count_by_root: HashMap<u32, u64> = HashMap::new();
    match (&class_index, mode) {
        (_, ClusterMode::Raw) => {
            for &(a, _) in &edges {
                *edge_count_by_root.entry(uf.find(a)).or_default() += 1;
            }
        }
        (Some(per_member), ClusterMode::CollapsedRotations) => {
            // Count distinct class pairs; edges inside one class vanish.
            let mut seen: HashSet<(usize, usize)> = HashSet::new();
            for &(a, b) in &edges {
                let (ca, cb) = (per_member[a as usize], per_member[b as usize]);
                if ca == cb {
                    continue;
                }
                let key = (ca.min(cb), ca.max(cb));
                if seen.insert(key) {
                    *edge_count_by_root.entry(uf.find(a)).or_default() += 1;
                }
            }
        }
        (None, ClusterMode::CollapsedRotations) => unreachable!(),
    }

    let mut components: Vec<ClusterComponent> = members_by_root
        .into_iter()
        .map(|(root, members)| {
            let member_ranks: Vec<u64> =
                members.iter().map(|&i| census.viable_ranks[i]).collect();
            let size = match &class_index {
                None => members.len() as u64,
                Some(per_member) => members
                    .iter()
                    .map(|&i| per_member[i])
                    .collect::<HashSet<_>>()
                    .len() as u64,
            };
            let id = member_ranks[0];
            ClusterComponent {
                id,
                representative: id,
                size,
                edge_count: edge_count_by_root.get(&root).copied().unwrap_or(0),
                member_ranks,
            }
        })
        .collect();

    components.sort_by(|a, b| b.size.cmp(&a.size).then(a.id.cmp(&b.id)));
    ClusterSet { mode, components }
}
