//! Rotation equivalence over the viable set.
//!
//! Genomes are circular, so two distinct sequences may be the same program
//! read from different start positions. Rotation never changes execution
//! here (the machine always starts at position 0), so rotated variants are
//! distinct genotypes that merely share structure; grouping them is an
//! analysis-layer view.

use std::collections::{BTreeSet, HashMap};

use crate::census::Census;

/// One rotation class: the viable members of a rotation orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationClass {
    /// Lexicographically smallest member, which for fixed length and base
    /// is also the smallest rank.
    pub representative: u64,
    /// Member ranks, ascending.
    pub members: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationClasses {
    /// Classes ordered by representative rank.
    pub classes: Vec<RotationClass>,
}

impl RotationClasses {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Map from member rank to index into `classes`.
    pub fn class_index_by_rank(&self) -> HashMap<u64, usize> {
        let mut map = HashMap::new();
        for (index, class) in self.classes.iter().enumerate() {
            for &rank in &class.members {
                map.insert(rank, index);
            }
        }
        map
    }
}

/// Ranks of all cyclic rotations of the given digits (duplicates collapse,
/// e.g. for constant sequences).
pub(crate) fn rotation_orbit_ranks(digits: &[u8], alphabet: u8) -> BTreeSet<u64> {
    let length = digits.len();
    let mut orbit = BTreeSet::new();
    for shift in 0..length {
        let mut rank = 0u64;
        for p in 0..length {
            rank = rank * alphabet as u64 + digits[(p + shift) % length] as u64;
        }
        orbit.insert(rank);
    }
    orbit
}

/// Partition the viable set by rotation equivalence. A class's members are
/// exactly the viable rotations; rotations that are not themselves viable
/// never join or represent a class.
pub fn rotation_classes(census: &Census) -> RotationClasses {
    let mut assigned = vec![false; census.viable_ranks.len()];
    let mut classes = Vec::new();
    for (index, &rank) in census.viable_ranks.iter().enumerate() {
        if assigned[index] {
            continue;
        }
        let genome = census.genome(rank).expect("viable rank within space");
        let orbit = rotation_orbit_ranks(genome.symbols(), census.alphabet());
        let mut members = Vec::new();
        for candidate in orbit {
            if let Some(i) = census.viable_index(candidate) {
                assigned[i] = true;
                members.push(candidate);
            }
        }
        debug_assert_eq!(members.first(), Some(&rank), "scan order visits minima first");
        classes.push(RotationClass {
            representative: members[0],
            members,
        });
    }
    RotationClasses { classes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{run_census, CensusConfig};
    use crate::genome::Genome;
    use crate::isa::IsaSpec;

    fn census(length: u32) -> Census {
        let mut config = CensusConfig::new(length, IsaSpec::default_v1()).unwrap();
        config.shard_count = 8;
        run_census(&config, 2).unwrap()
    }

    #[test]
    fn orbit_of_constant_sequence_is_singleton() {
        let g = Genome::from_letters("aaaa", 8).unwrap();
        assert_eq!(rotation_orbit_ranks(g.symbols(), 8).len(), 1);
    }

    #[test]
    fn orbit_lists_every_rotation() {
        let g = Genome::from_letters("cde", 8).unwrap();
        let orbit = rotation_orbit_ranks(g.symbols(), 8);
        let expected: BTreeSet<u64> = ["cde", "dec", "ecd"]
            .iter()
            .map(|s| Genome::from_letters(s, 8).unwrap().rank())
            .collect();
        assert_eq!(orbit, expected);
    }

    #[test]
    fn minimal_loop_rotations_form_one_class() {
        let census = census(3);
        let classes = rotation_classes(&census);
        let cde = Genome::from_letters("cde", 8).unwrap().rank();
        let class = classes
            .classes
            .iter()
            .find(|c| c.members.contains(&cde))
            .expect("cde is viable");
        assert_eq!(class.members.len(), 3);
        assert_eq!(class.representative, *class.members.iter().min().unwrap());
    }

    #[test]
    fn constant_sequence_forms_a_class_of_one() {
        let config = CensusConfig::new(3, IsaSpec::default_v1()).unwrap();
        let aaa = Genome::from_letters("aaa", 8).unwrap().rank();
        let bca = Genome::from_letters("bca", 8).unwrap().rank();
        let abc = Genome::from_letters("abc", 8).unwrap().rank();
        let mut viable = vec![aaa, bca, abc];
        viable.sort_unstable();
        let census = Census {
            length: 3,
            isa: config.isa.clone(),
            limits: config.limits,
            budgets: config.budgets,
            total: config.total(),
            viable_ranks: viable,
            self_replicator_count: 0,
            bitmap: None,
        };
        let classes = rotation_classes(&census);
        assert_eq!(classes.class_count(), 2);
        assert_eq!(classes.classes[0].members, vec![aaa]);
        // abc and bca are rotations of each other; both viable, one class.
        assert_eq!(classes.classes[1].members.len(), 2);
    }

    #[test]
    fn classes_partition_the_viable_set() {
        let census = census(4);
        let classes = rotation_classes(&census);
        let mut seen: Vec<u64> = classes
            .classes
            .iter()
            .flat_map(|c| c.members.iter().copied())
            .collect();
        seen.sort_unstable();
        assert_eq!(seen, census.viable_ranks);
        assert!(classes.class_count() as u64 <= census.viable_count());
    }
}
