//! Frequent-usage-pattern mining over usage transactions.
//!
//! Patterns are mined with FPGrowth (a frequency-ordered prefix tree with
//! conditional-tree recursion), reduced to maximal itemsets, and completed
//! by attaching every rarely used class to the pattern it merges with best.
//! A support sweep reruns the mining across a list of thresholds and
//! tabulates pattern count and mean size per threshold.
//!
//! Supports are exact rationals (`count / total`).  The minimum-support
//! threshold arrives as a float; it is interpreted through its shortest
//! decimal form (the number as written, e.g. `0.45` means 45/100) and
//! compared exactly, so no binary rounding artifact can flip a frequency
//! decision.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::model::{ClassId, ItemSet};

/// Exact support of an itemset: transactions containing it over all
/// transactions, normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Support {
    num: u64,
    den: u64,
}

impl Support {
    /// `count` containing transactions out of `total` (> 0).
    pub fn new(count: usize, total: usize) -> Self {
        assert!(total > 0, "support needs at least one transaction");
        let (mut num, mut den) = (count as u64, total as u64);
        let g = gcd(num, den);
        num /= g;
        den /= g;
        Support { num, den }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Normalized numerator and denominator.
    pub fn as_ratio(&self) -> (u64, u64) {
        (self.num, self.den)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl PartialOrd for Support {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Support {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Cross-multiplication; u64 × u64 fits in u128.
        let left = self.num as u128 * other.den as u128;
        let right = other.num as u128 * self.den as u128;
        left.cmp(&right)
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for Support {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.value())
    }
}

/// Exact frequency threshold.
///
/// Built from the threshold's shortest decimal representation, so `0.45`
/// admits a support of exactly 9/20 even though the nearest binary double
/// lies a hair above 45/100.
#[derive(Debug, Clone)]
struct MinSup {
    threshold: BigRational,
}

impl MinSup {
    fn new(minsup: f64) -> Result<Self, MineError> {
        if !minsup.is_finite() || minsup <= 0.0 || minsup > 1.0 {
            return Err(MineError::InvalidMinsup(minsup));
        }
        // `f64::to_string` yields the shortest decimal that round-trips —
        // the number as a person would write it.
        let text = minsup.to_string();
        let (int_part, frac_part) = text.split_once('.').unwrap_or((text.as_str(), ""));
        let digits: String = format!("{int_part}{frac_part}");
        let num: BigInt = digits.parse().expect("decimal digits parse");
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        Ok(MinSup {
            threshold: BigRational::new(num, den),
        })
    }

    /// Is `count`/`total` at or above the threshold?
    fn admits(&self, count: usize, total: usize) -> bool {
        BigRational::new(BigInt::from(count), BigInt::from(total)) >= self.threshold
    }
}

/// One frequent usage pattern: a maximal frequent itemset plus the rare
/// classes later attached to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pattern {
    pub items: ItemSet,
    pub support: Support,
    pub attached: ItemSet,
}

/// Mining outcome at one threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FupResult {
    pub minsup: f64,
    pub patterns: Vec<Pattern>,
    /// Classes seen in transactions but in no pattern (before attachment).
    pub uncovered: ItemSet,
}

/// One row of a support sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub minsup: f64,
    pub pattern_count: usize,
    pub mean_pattern_size: f64,
}

#[derive(Debug, Error)]
pub enum MineError {
    #[error("minsup must lie in (0, 1], got {0}")]
    InvalidMinsup(f64),
    #[error("cannot mine patterns from no transactions")]
    NoTransactions,
    #[error("rare classes exist but there is no pattern to attach them to")]
    NoPatterns,
}

/// All itemsets whose support reaches `minsup`, mined with FPGrowth.
///
/// Output is sorted by descending support, then ascending size, then
/// lexicographic items.
pub fn mine_frequent(
    transactions: &[ItemSet],
    minsup: f64,
) -> Result<Vec<(ItemSet, Support)>, MineError> {
    let threshold = MinSup::new(minsup)?;
    if transactions.is_empty() {
        return Err(MineError::NoTransactions);
    }
    let total = transactions.len();

    // Intern classes in lexicographic order: interned id order = lex order.
    let universe: ItemSet = transactions.iter().flatten().cloned().collect();
    let names: Vec<&ClassId> = universe.iter().collect();
    let index: BTreeMap<&ClassId, u32> = names
        .iter()
        .enumerate()
        .map(|(i, id)| (*id, i as u32))
        .collect();
    let interned: Vec<(Vec<u32>, usize)> = transactions
        .iter()
        .map(|t| (t.iter().map(|id| index[id]).collect(), 1))
        .collect();

    let mut mined: Vec<(Vec<u32>, usize)> = Vec::new();
    mine_rec(interned, Vec::new(), total, &threshold, &mut mined);

    let mut out: Vec<(ItemSet, Support)> = mined
        .into_iter()
        .map(|(items, count)| {
            let set: ItemSet = items.into_iter().map(|i| names[i as usize].clone()).collect();
            (set, Support::new(count, total))
        })
        .collect();
    out.sort_by(|(ia, sa), (ib, sb)| {
        sb.cmp(sa)
            .then(ia.len().cmp(&ib.len()))
            .then_with(|| ia.cmp(ib))
    });
    Ok(out)
}

/// One FPGrowth level: mine the (weighted) `transactions`, emitting every
/// frequent item joined with `suffix`, then recurse into each item's
/// conditional base.
fn mine_rec(
    transactions: Vec<(Vec<u32>, usize)>,
    suffix: Vec<u32>,
    total: usize,
    threshold: &MinSup,
    out: &mut Vec<(Vec<u32>, usize)>,
) {
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for (items, weight) in &transactions {
        for &item in items {
            *counts.entry(item).or_insert(0) += weight;
        }
    }
    // Frequent items, most frequent first (ties by interned = lex order).
    let mut frequent: Vec<(u32, usize)> = counts
        .into_iter()
        .filter(|&(_, c)| threshold.admits(c, total))
        .collect();
    frequent.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    if frequent.is_empty() {
        return;
    }
    let rank: BTreeMap<u32, usize> = frequent
        .iter()
        .enumerate()
        .map(|(r, &(item, _))| (item, r))
        .collect();

    // Prefix tree of the filtered, frequency-ordered transactions.
    struct Node {
        count: usize,
        parent: usize,
        children: BTreeMap<usize, usize>,
    }
    let mut arena = vec![Node {
        count: 0,
        parent: usize::MAX,
        children: BTreeMap::new(),
    }];
    let mut header: Vec<Vec<usize>> = vec![Vec::new(); frequent.len()];
    let mut node_rank: Vec<usize> = vec![usize::MAX];
    for (items, weight) in &transactions {
        let mut path: Vec<usize> = items.iter().filter_map(|i| rank.get(i).copied()).collect();
        path.sort_unstable();
        path.dedup();
        let mut at = 0usize;
        for r in path {
            let next = match arena[at].children.get(&r) {
                Some(&n) => n,
                None => {
                    let n = arena.len();
                    arena.push(Node {
                        count: 0,
                        parent: at,
                        children: BTreeMap::new(),
                    });
                    node_rank.push(r);
                    arena[at].children.insert(r, n);
                    header[r].push(n);
                    n
                }
            };
            arena[next].count += weight;
            at = next;
        }
    }

    // Least frequent first: emit and recurse on the conditional base.
    for r in (0..frequent.len()).rev() {
        let (item, count) = frequent[r];
        let mut itemset = suffix.clone();
        itemset.push(item);
        itemset.sort_unstable();
        out.push((itemset.clone(), count));

        let mut base: Vec<(Vec<u32>, usize)> = Vec::new();
        for &leaf in &header[r] {
            let weight = arena[leaf].count;
            let mut path = Vec::new();
            let mut at = arena[leaf].parent;
            while at != 0 && at != usize::MAX {
                path.push(frequent[node_rank[at]].0);
                at = arena[at].parent;
            }
            if !path.is_empty() {
                base.push((path, weight));
            }
        }
        if !base.is_empty() {
            mine_rec(base, itemset, total, threshold, out);
        }
    }
}

/// Keep only itemsets with no frequent proper superset.
pub fn maximal(frequent: &[(ItemSet, Support)]) -> Vec<Pattern> {
    frequent
        .iter()
        .filter(|(items, _)| {
            !frequent
                .iter()
                .any(|(other, _)| other.len() > items.len() && items.is_subset(other))
        })
        .map(|(items, support)| Pattern {
            items: items.clone(),
            support: *support,
            attached: ItemSet::new(),
        })
        .collect()
}

/// Mine, filter to maximal patterns, and report which transaction classes
/// the patterns leave uncovered.
pub fn mine_maximal(transactions: &[ItemSet], minsup: f64) -> Result<FupResult, MineError> {
    let frequent = mine_frequent(transactions, minsup)?;
    let patterns = maximal(&frequent);
    let mut uncovered: ItemSet = transactions.iter().flatten().cloned().collect();
    for p in &patterns {
        for id in &p.items {
            uncovered.remove(id);
        }
    }
    Ok(FupResult {
        minsup,
        patterns,
        uncovered,
    })
}

/// Attach every uncovered class to the pattern whose items it co-occurs
/// with most (highest merged support; ties to the higher-support pattern,
/// then the lexicographically smaller one).
pub fn assign_rare_classes(
    mut result: FupResult,
    transactions: &[ItemSet],
) -> Result<FupResult, MineError> {
    if result.uncovered.is_empty() {
        return Ok(result);
    }
    if result.patterns.is_empty() {
        return Err(MineError::NoPatterns);
    }
    if transactions.is_empty() {
        return Err(MineError::NoTransactions);
    }
    let total = transactions.len();
    let uncovered = std::mem::take(&mut result.uncovered);
    for class in uncovered {
        let mut best: Option<(Support, usize)> = None;
        for (i, pattern) in result.patterns.iter().enumerate() {
            let count = transactions
                .iter()
                .filter(|t| t.contains(&class) && pattern.items.is_subset(t))
                .count();
            let merged = Support::new(count, total);
            let better = match best {
                None => true,
                Some((best_merged, b)) => {
                    let current = &result.patterns[b];
                    (merged, pattern.support, &current.items)
                        > (best_merged, current.support, &pattern.items)
                }
            };
            if better {
                best = Some((merged, i));
            }
        }
        let (_, winner) = best.expect("patterns non-empty");
        result.patterns[winner].attached.insert(class);
    }
    Ok(result)
}

/// Rerun maximal mining at each threshold and tabulate the outcome.
pub fn support_sweep(
    transactions: &[ItemSet],
    thresholds: &[f64],
) -> Result<Vec<SweepRow>, MineError> {
    thresholds
        .iter()
        .map(|&minsup| {
            let result = mine_maximal(transactions, minsup)?;
            let count = result.patterns.len();
            let mean = if count == 0 {
                0.0
            } else {
                result.patterns.iter().map(|p| p.items.len()).sum::<usize>() as f64 / count as f64
            };
            Ok(SweepRow {
                minsup,
                pattern_count: count,
                mean_pattern_size: mean,
            })
        })
        .collect()
}

/// Render sweep rows as CSV with four fractional digits.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("minsup,pattern_count,mean_pattern_size\n");
    for row in rows {
        out.push_str(&format!(
            "{:.4},{},{:.4}\n",
            row.minsup, row.pattern_count, row.mean_pattern_size
        ));
    }
    out
}
