//! Greedy agglomerative grouping shared by every stage that partitions
//! classes (client partitioning, interface identification, the usage-free
//! baseline).
//!
//! The engine is generic over a set-fitness function.  It starts from
//! singletons and repeatedly merges the pair of groups whose union scores
//! highest, as long as that best union still reaches the stop threshold.
//! All choices are deterministic: among equally fit unions the
//! lexicographically smallest wins, and a non-finite score never wins.

use crate::model::ItemSet;

/// Partition `items` into groups by greedy pairwise merging.
///
/// Each round evaluates `fitness` on the union of every pair of current
/// groups and merges the best-scoring pair; the process stops when the best
/// union scores below `tau` (NaN counts as below everything) or one group
/// remains.  The returned groups are sorted and form a partition of `items`.
pub fn agglomerate<F>(items: &ItemSet, tau: f64, mut fitness: F) -> Vec<ItemSet>
where
    F: FnMut(&ItemSet) -> f64,
{
    let mut groups: Vec<ItemSet> = items
        .iter()
        .map(|id| ItemSet::from([id.clone()]))
        .collect();
    while groups.len() > 1 {
        let mut best: Option<(f64, usize, usize, ItemSet)> = None;
        for i in 0..groups.len() {
            for j in i + 1..groups.len() {
                let union: ItemSet = groups[i].union(&groups[j]).cloned().collect();
                let score = fitness(&union);
                if score.is_nan() {
                    continue;
                }
                let better = match &best {
                    None => true,
                    Some((s, _, _, u)) => score > *s || (score == *s && union < *u),
                };
                if better {
                    best = Some((score, i, j, union));
                }
            }
        }
        match best {
            Some((score, i, j, union)) if score >= tau => {
                groups.remove(j);
                groups[i] = union;
            }
            _ => break,
        }
    }
    groups.sort();
    groups
}
