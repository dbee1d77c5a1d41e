//! Factors as partitions of the experimental units.
//!
//! A factor assigns every unit exactly one level; two factors on the same
//! unit set are compared through the finer/coarser partial order on their
//! partitions. The infimum `F∧G` has the occupied (level-of-F, level-of-G)
//! pairs as levels; the supremum `F∨G` is the coarsest factor on which
//! agreement in F or in G forces agreement, computed as the connected
//! components of the level co-occurrence graph.
//!
//! Two special factors bound the order: the universal factor `U` with one
//! level and the equality factor `E` with one level per unit.

use crate::error::{Error, Result};

/// Role a factor plays in the design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Role {
    Fixed,
    Random,
    /// A factor arising as a supremum of random factors that coincides with a
    /// declared fixed factor. It labels a stratum but contributes no variance
    /// parameter of its own.
    DependentRandom,
    Universal,
    Equality,
}

/// A factor: a named partition of the units `0..n_units`.
///
/// Levels are stored extensionally as a unit -> level map, relabelled so that
/// level ids appear in order of first occurrence. All comparisons between
/// factors are therefore comparisons of partitions, independent of the labels
/// the factor was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    name: String,
    levels: Vec<u32>,
    n_levels: usize,
}

impl Factor {
    /// Build a factor from raw level labels, canonicalising to
    /// first-occurrence order.
    pub fn from_levels(name: impl Into<String>, raw: &[u32]) -> Factor {
        let mut map = std::collections::HashMap::new();
        let mut levels = Vec::with_capacity(raw.len());
        for &r in raw {
            let next = map.len() as u32;
            let id = *map.entry(r).or_insert(next);
            levels.push(id);
        }
        Factor {
            name: name.into(),
            levels,
            n_levels: map.len(),
        }
    }

    /// The universal factor: one level shared by every unit.
    pub fn universal(n_units: usize) -> Factor {
        Factor {
            name: "U".into(),
            levels: vec![0; n_units],
            n_levels: 1,
        }
    }

    /// The equality factor: one level per unit.
    pub fn equality(n_units: usize) -> Factor {
        Factor {
            name: "E".into(),
            levels: (0..n_units as u32).collect(),
            n_levels: n_units,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn n_units(&self) -> usize {
        self.levels.len()
    }

    pub fn n_levels(&self) -> usize {
        self.n_levels
    }

    /// Level of each unit, ids dense in `0..n_levels`.
    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn level_of(&self, unit: usize) -> u32 {
        self.levels[unit]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.n_levels];
        for &l in &self.levels {
            sizes[l as usize] += 1;
        }
        sizes
    }

    pub fn is_universal(&self) -> bool {
        self.n_levels == 1
    }

    pub fn is_equality(&self) -> bool {
        self.n_levels == self.levels.len()
    }

    fn check_same_units(&self, other: &Factor) -> Result<()> {
        if self.levels.len() != other.levels.len() {
            return Err(Error::Structure(format!(
                "factors `{}` ({} units) and `{}` ({} units) are not on the same unit set",
                self.name,
                self.levels.len(),
                other.name,
                other.levels.len()
            )));
        }
        Ok(())
    }

    /// Equality of the underlying partitions (names and labellings ignored).
    pub fn same_partition(&self, other: &Factor) -> bool {
        if self.levels.len() != other.levels.len() || self.n_levels != other.n_levels {
            return false;
        }
        // Canonical labelling makes partition equality a plain vector compare.
        self.levels == other.levels
    }

    /// True iff every class of `self` lies within a class of `other`.
    pub fn is_finer_or_equal(&self, other: &Factor) -> Result<bool> {
        self.check_same_units(other)?;
        let mut class_target = vec![u32::MAX; self.n_levels];
        for (u, &l) in self.levels.iter().enumerate() {
            let t = other.levels[u];
            let slot = &mut class_target[l as usize];
            if *slot == u32::MAX {
                *slot = t;
            } else if *slot != t {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Strictly finer: finer-or-equal with a different partition.
    pub fn is_finer(&self, other: &Factor) -> Result<bool> {
        Ok(self.is_finer_or_equal(other)? && !self.same_partition(other))
    }

    /// The infimum `F∧G`: levels are the occupied (level, level) pairs.
    pub fn infimum(&self, other: &Factor) -> Result<Factor> {
        self.check_same_units(other)?;
        let raw: Vec<u32> = self
            .levels
            .iter()
            .zip(&other.levels)
            .map(|(&a, &b)| a * other.n_levels as u32 + b)
            .collect();
        let mut f = Factor::from_levels(compose_name(&self.name, &other.name), &raw);
        f.set_name(compose_name(&self.name, &other.name));
        Ok(f)
    }

    /// The supremum `F∨G`: connected components of the bipartite graph on
    /// levels of F and G linked by co-occurrence on a unit.
    pub fn supremum(&self, other: &Factor) -> Result<Factor> {
        self.check_same_units(other)?;
        let mut uf = UnionFind::new(self.n_levels + other.n_levels);
        for (u, &a) in self.levels.iter().enumerate() {
            let b = other.levels[u];
            uf.union(a as usize, self.n_levels + b as usize);
        }
        let raw: Vec<u32> = self
            .levels
            .iter()
            .map(|&a| uf.find(a as usize) as u32)
            .collect();
        Ok(Factor::from_levels(
            format!("{}∨{}", self.name, other.name),
            &raw,
        ))
    }
}

/// Interaction names read `A∧B`; U acts as the empty combination.
fn compose_name(a: &str, b: &str) -> String {
    match (a, b) {
        ("U", _) => b.to_string(),
        (_, "U") => a.to_string(),
        _ => format!("{a}∧{b}"),
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn crossed(n_a: u32, n_b: u32, reps: u32) -> (Factor, Factor) {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for i in 0..n_a {
            for j in 0..n_b {
                for _ in 0..reps {
                    a.push(i);
                    b.push(j);
                }
            }
        }
        (Factor::from_levels("A", &a), Factor::from_levels("B", &b))
    }

    #[test]
    fn infimum_of_crossed_factors_has_product_levels() {
        // 16 therapists fully crossed with 5 batches -> 80 occupied pairs.
        let (t, b) = crossed(16, 5, 2);
        let inf = t.infimum(&b).unwrap();
        assert_eq!(inf.n_levels(), 80);
    }

    #[test]
    fn infimum_with_universal_is_identity_up_to_relabelling() {
        let (t, _) = crossed(4, 3, 1);
        let u = Factor::universal(t.n_units());
        let inf = t.infimum(&u).unwrap();
        assert!(inf.same_partition(&t));
        let inf2 = u.infimum(&t).unwrap();
        assert!(inf2.same_partition(&t));
    }

    #[test]
    fn infimum_of_nested_factors_is_the_finer_one() {
        // Figure 2c shape: 48 therapists, 8 in each of 6 centres. T∧C = T.
        let mut t_raw = Vec::new();
        let mut c_raw = Vec::new();
        for centre in 0..6u32 {
            for local in 0..8u32 {
                for _ in 0..20 {
                    t_raw.push(centre * 8 + local);
                    c_raw.push(centre);
                }
            }
        }
        let t = Factor::from_levels("T", &t_raw);
        let c = Factor::from_levels("C", &c_raw);
        let inf = t.infimum(&c).unwrap();
        assert_eq!(inf.n_levels(), 48);
        assert!(inf.same_partition(&t));
        assert!(t.is_finer(&c).unwrap());
    }

    #[test]
    fn supremum_of_arm_interactions_recovers_the_arm_factor() {
        // Randomised block layout: I (2) x T (4) x B (3), one rep.
        let mut i_raw = Vec::new();
        let mut t_raw = Vec::new();
        let mut b_raw = Vec::new();
        for b in 0..3u32 {
            for i in 0..2u32 {
                for t in 0..4u32 {
                    i_raw.push(i);
                    t_raw.push(t);
                    b_raw.push(b);
                }
            }
        }
        let fi = Factor::from_levels("I", &i_raw);
        let ft = Factor::from_levels("T", &t_raw);
        let fb = Factor::from_levels("B", &b_raw);
        let it = fi.infimum(&ft).unwrap();
        let ib = fi.infimum(&fb).unwrap();
        let sup = it.supremum(&ib).unwrap();
        assert_eq!(sup.n_levels(), 2);
        assert!(sup.same_partition(&fi));
        // sup with U is U.
        let u = Factor::universal(fi.n_units());
        assert!(fi.supremum(&u).unwrap().is_universal());
        // I and T are crossed, so neither is finer than the other.
        assert!(!fi.is_finer(&ft).unwrap());
        assert!(!ft.is_finer(&fi).unwrap());
    }

    #[test]
    fn equality_factor_is_finer_than_everything() {
        let (a, b) = crossed(3, 2, 2);
        let e = Factor::equality(a.n_units());
        assert!(e.is_finer(&a).unwrap());
        assert!(e.is_finer(&b).unwrap());
        assert!(e.is_finer(&Factor::universal(a.n_units())).unwrap());
    }

    #[test]
    fn mismatched_unit_sets_error() {
        let a = Factor::universal(4);
        let b = Factor::universal(5);
        assert!(a.infimum(&b).is_err());
        assert!(a.supremum(&b).is_err());
        assert!(a.is_finer_or_equal(&b).is_err());
    }
}
