//! Orders of alternatives derived from score vectors.

use std::fmt;

use crate::error::{Error, Result};
use crate::semiring::Tolerance;

/// Link between two consecutive groups of a [`RankingOrder`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `≻`: every member of the upper group is strictly preferred.
    Strict,
    /// `⪰`: preferred or tied, depending on the underlying solution.
    Weak,
    /// No consistent direction across the combined rankings.
    Incomparable,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Strict => ">",
            Relation::Weak => ">=",
            Relation::Incomparable => "||",
        }
    }
}

/// Ordered partition of alternatives (zero-based indices). Members of a
/// group are tied (`≡`); consecutive groups are joined by `links`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingOrder {
    pub groups: Vec<Vec<usize>>,
    pub links: Vec<Relation>,
    /// Pairs `(i, j)`, `i < j`, ranked in opposite directions by different
    /// rankings. Always empty for a ranking derived from one vector.
    pub incomparable: Vec<(usize, usize)>,
}

impl RankingOrder {
    /// Number of ranked alternatives.
    pub fn len(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Group index of every alternative.
    pub fn group_of(&self) -> Vec<usize> {
        let mut at = vec![0; self.len()];
        for (g, members) in self.groups.iter().enumerate() {
            for &i in members {
                at[i] = g;
            }
        }
        at
    }

    /// Number of alternatives strictly above each alternative.
    fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.len()];
        let mut above = 0;
        for members in &self.groups {
            for &i in members {
                pos[i] = above;
            }
            above += members.len();
        }
        pos
    }
}

impl fmt::Display for RankingOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (g, members) in self.groups.iter().enumerate() {
            if g > 0 {
                write!(f, " {} ", self.links[g - 1].symbol())?;
            }
            let names: Vec<String> = members.iter().map(|i| format!("({})", i + 1)).collect();
            f.write_str(&names.join(" == "))?;
        }
        Ok(())
    }
}

/// Sorts alternatives by descending score. Neighbours whose scores agree
/// within `tie_rel` share a group; groups are linked strictly.
pub fn derive_ranking(scores: &[f64], tol: &Tolerance) -> RankingOrder {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut prev: Option<f64> = None;
    for i in order {
        match (prev, groups.last_mut()) {
            (Some(p), Some(group)) if tol.tied(p, scores[i]) => group.push(i),
            _ => groups.push(vec![i]),
        }
        prev = Some(scores[i]);
    }
    for g in &mut groups {
        g.sort_unstable();
    }
    let links = vec![Relation::Strict; groups.len().saturating_sub(1)];
    RankingOrder {
        groups,
        links,
        incomparable: Vec::new(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PairRelation {
    Tied,
    Strict,
    Weak,
    Incomparable,
}

/// Relation of `i` to `j` over all rankings, from `i`'s side, given the
/// group index of each in every ranking. `None` when `j` is above `i`
/// everywhere.
fn pair_relation(gi: &[usize], gj: &[usize]) -> Option<PairRelation> {
    let (mut above, mut tied, mut below) = (false, false, false);
    for (a, b) in gi.iter().zip(gj) {
        match a.cmp(b) {
            std::cmp::Ordering::Less => above = true,
            std::cmp::Ordering::Equal => tied = true,
            std::cmp::Ordering::Greater => below = true,
        }
    }
    match (above, tied, below) {
        (true, _, true) => Some(PairRelation::Incomparable),
        (false, true, false) => Some(PairRelation::Tied),
        (true, false, false) => Some(PairRelation::Strict),
        (true, true, false) => Some(PairRelation::Weak),
        _ => None,
    }
}

/// Combines rankings of the same alternatives into one order.
///
/// For a pair `i, j`: `i ≻ j` when `i` is strictly above in every ranking,
/// `i ≡ j` when tied in every ranking, `i ⪰ j` when above or tied in every
/// ranking with both cases occurring, and incomparable when the rankings
/// disagree on the direction.
pub fn combine_rankings(rankings: &[RankingOrder]) -> Result<RankingOrder> {
    let first = rankings
        .first()
        .ok_or_else(|| Error::Invalid("no rankings to combine".into()))?;
    let n = first.len();
    for r in rankings {
        let mut seen = vec![false; n];
        let valid = r.len() == n
            && r.groups.iter().flatten().all(|&i| i < n && !std::mem::replace(&mut seen[i], true));
        if !valid {
            return Err(Error::Invalid(
                "rankings are over different sets of alternatives".into(),
            ));
        }
    }

    let group_of: Vec<Vec<usize>> = rankings.iter().map(RankingOrder::group_of).collect();
    // per alternative, its group index in each ranking
    let by_alt: Vec<Vec<usize>> = (0..n)
        .map(|i| group_of.iter().map(|g| g[i]).collect())
        .collect();
    // callers only ask about pairs in linear-extension order, where the
    // lower alternative is never above the upper one everywhere
    let rel = |i: usize, j: usize| -> PairRelation {
        pair_relation(&by_alt[i], &by_alt[j]).unwrap_or(PairRelation::Incomparable)
    };

    // sum of positions is a linear extension of the common preorder
    let positions: Vec<Vec<usize>> = rankings.iter().map(RankingOrder::positions).collect();
    let key = |i: usize| -> usize { positions.iter().map(|p| p[i]).sum() };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (key(i), i));

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in order {
        let joined = groups
            .iter_mut()
            .find(|g| rel(g[0], i) == PairRelation::Tied);
        match joined {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    for g in &mut groups {
        g.sort_unstable();
    }

    let links = groups
        .windows(2)
        .map(|w| {
            let (upper, lower) = (w[0][0], w[1][0]);
            match rel(upper, lower) {
                PairRelation::Strict => Relation::Strict,
                PairRelation::Weak | PairRelation::Tied => Relation::Weak,
                PairRelation::Incomparable => Relation::Incomparable,
            }
        })
        .collect();

    let mut incomparable = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if pair_relation(&by_alt[i], &by_alt[j]) == Some(PairRelation::Incomparable) {
                incomparable.push((i, j));
            }
        }
    }

    Ok(RankingOrder {
        groups,
        links,
        incomparable,
    })
}
