//! Piece labels (the symmetric sequence f_a, plus a component when f_0 = 0) and
//! the finer class labels in characteristic 2.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{GradedView, QFiltration};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::quadspace::{FormType, QuadSpace};

/// f_a = dim gr^a for a ≥ 0 (f_{−a} = f_a), trailing zeros trimmed, and for
/// f_0 = 0 the class j ∈ {0, 1} of X^{≥1} among maximal totally singular subspaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PieceLabel {
    pub f: Vec<usize>,
    pub component: Option<u8>,
}

impl PieceLabel {
    pub fn new(mut f: Vec<usize>, component: Option<u8>) -> Self {
        while f.len() > 1 && f.last() == Some(&0) {
            f.pop();
        }
        if f.is_empty() {
            f.push(0);
        }
        PieceLabel { f, component }
    }

    pub fn f(&self, a: i32) -> usize {
        self.f.get(a.unsigned_abs() as usize).copied().unwrap_or(0)
    }

    pub fn max_degree(&self) -> i32 {
        (self.f.len() - 1) as i32
    }

    pub fn dim(&self) -> usize {
        self.f[0] + 2 * self.f[1..].iter().sum::<usize>()
    }

    /// (f_{−A}, …, f_A).
    pub fn sequence(&self) -> Vec<usize> {
        let top = self.max_degree();
        (-top..=top).map(|a| self.f(a)).collect()
    }

    /// f_0 ≥ f_2 ≥ f_4 ≥ …, f_1 ≥ f_3 ≥ …, and every f_a with a odd even.
    pub fn is_admissible(&self) -> bool {
        let f = |a: usize| self.f.get(a).copied().unwrap_or(0);
        (0..self.f.len()).all(|a| f(a + 2) <= f(a) && (a % 2 == 0 || f(a) % 2 == 0))
    }

    pub fn without_component(&self) -> PieceLabel {
        PieceLabel { f: self.f.clone(), component: None }
    }
}

impl fmt::Display for PieceLabel {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let seq: Vec<String> = self.sequence().iter().map(|x| x.to_string()).collect();
        write!(out, "({})", seq.join(","))?;
        if let Some(j) = self.component {
            write!(out, "/{j}")?;
        }
        Ok(())
    }
}

impl FromStr for PieceLabel {
    type Err = Error;

    /// Parses "(1,0,1,0,1)" or "(0,2,0)/1".
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad piece label {s:?}"));
        let (seq, comp) = match s.split_once('/') {
            Some((a, b)) => (a, Some(b.trim().parse::<u8>().map_err(|_| bad())?)),
            None => (s, None),
        };
        let inner = seq.trim().strip_prefix('(').and_then(|x| x.strip_suffix(')')).ok_or_else(bad)?;
        let vals = inner.split(',').map(|x| x.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
        if vals.len() % 2 == 0 || comp.is_some_and(|j| j > 1) {
            return Err(bad());
        }
        let mid = vals.len() / 2;
        if (0..mid).any(|i| vals[i] != vals[vals.len() - 1 - i]) {
            return Err(bad());
        }
        Ok(PieceLabel::new(vals[mid..].to_vec(), comp))
    }
}

/// Every admissible label for a D-dimensional space of the given type: the
/// f_0 = 0 labels come twice (j = 0, 1) when η = +1 and not at all when η = −1.
pub fn admissible_labels(d: usize, form_type: FormType) -> Vec<PieceLabel> {
    fn go(budget: usize, f: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if budget == 0 {
            out.push(f.clone());
            return;
        }
        let a = f.len();
        let cap = if a >= 2 { f[a - 2] } else { usize::MAX };
        let max = if a == 0 { budget } else { budget / 2 };
        for v in 0..=max.min(cap) {
            if a % 2 == 1 && v % 2 == 1 {
                continue;
            }
            let cost = if a == 0 { v } else { 2 * v };
            // Once f_a and f_{a+1} are both 0 nothing further can be placed.
            if v == 0 && a >= 1 && f[a - 1] == 0 {
                continue;
            }
            f.push(v);
            go(budget - cost, f, out);
            f.pop();
        }
    }
    if form_type.check_dim(d).is_err() {
        return Vec::new();
    }
    let mut seqs = Vec::new();
    go(d, &mut Vec::new(), &mut seqs);
    let mut out = BTreeSet::new();
    for f in seqs {
        let label = PieceLabel::new(f, None);
        if !label.is_admissible() {
            continue;
        }
        if label.f[0] == 0 && d > 0 {
            match form_type {
                FormType::Split => {
                    out.insert(PieceLabel { component: Some(0), ..label.clone() });
                    out.insert(PieceLabel { component: Some(1), ..label });
                }
                _ => {}
            }
        } else {
            out.insert(label);
        }
    }
    out.into_iter().collect()
}

/// The piece label of a Q-filtration.
pub fn piece_label(space: &QuadSpace, filt: &QFiltration) -> Result<PieceLabel> {
    let top = filt.max_degree();
    let f: Vec<usize> = (0..=top).map(|a| filt.f(a)).collect();
    let mut label = PieceLabel::new(f, None);
    if label.f[0] == 0 && space.dim() > 0 {
        let s0 = space.reference_ts().ok_or_else(|| Error::Precondition("component needs a typed split space".into()))?;
        let s = filt.at(1);
        if space.eta() != Some(1) || s.dim() * 2 != space.dim() {
            return Err(Error::Check("f_0 = 0 without a maximal totally singular X^(≥1)".into()));
        }
        let meet = s0.intersect(space.ctx(), s)?.dim();
        label.component = Some(((s.dim() - meet) % 2) as u8);
    }
    Ok(label)
}

/// Piece label plus, in characteristic 2, the partition of the odd values
/// i = f_a (a ≥ 0 even) according to which lines L_i ⊆ gr^0 coincide.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassLabel {
    pub piece: PieceLabel,
    pub partition: Vec<Vec<usize>>,
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", self.piece)?;
        if !self.partition.is_empty() {
            let blocks: Vec<String> =
                self.partition.iter().map(|b| b.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")).collect();
            write!(out, " {{{}}}", blocks.join(" | "))?;
        }
        Ok(())
    }
}

/// The class label of N with respect to its (adapted) filtration. The partition
/// is empty outside characteristic 2 and when f_0 = 0.
pub fn class_label(space: &QuadSpace, filt: &QFiltration, n: &Mat) -> Result<ClassLabel> {
    let piece = piece_label(space, filt)?;
    if !space.ctx().is_char2() || piece.f[0] == 0 {
        return Ok(ClassLabel { piece, partition: Vec::new() });
    }
    let view = GradedView::new(space, filt)?;
    let t = view.graded_part(n).ok_or_else(|| Error::Precondition("N does not raise the filtration by 2".into()))?;
    let lines = view.graded.class_lines(&t)?;
    let mut blocks: Vec<(crate::linalg::Subspace, Vec<usize>)> = Vec::new();
    for (i, l) in lines {
        match blocks.iter_mut().find(|(m, _)| *m == l) {
            Some((_, b)) => b.push(i),
            None => blocks.push((l, vec![i])),
        }
    }
    let mut partition: Vec<Vec<usize>> = blocks.into_iter().map(|(_, mut b)| {
        b.sort_unstable();
        b
    }).collect();
    partition.sort();
    Ok(ClassLabel { piece, partition })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(d: usize, t: FormType) -> Vec<String> {
        admissible_labels(d, t).iter().map(|l| l.to_string()).collect()
    }

    #[test]
    fn small_label_sets() {
        assert_eq!(labels(2, FormType::Split), vec!["(2)"]);
        assert_eq!(labels(2, FormType::NonSplit), vec!["(2)"]);
        assert_eq!(labels(3, FormType::Odd), vec!["(1,0,1,0,1)", "(3)"]);
        assert_eq!(admissible_labels(4, FormType::Split).len(), 4);
        assert_eq!(admissible_labels(4, FormType::NonSplit).len(), 2);
    }

    #[test]
    fn parse_round_trip() {
        for d in 2..=8 {
            for t in [FormType::Split, FormType::NonSplit, FormType::Odd] {
                for l in admissible_labels(d, t) {
                    assert_eq!(l.to_string().parse::<PieceLabel>().unwrap(), l);
                    assert_eq!(l.dim(), d);
                }
            }
        }
        assert!("(1,2)".parse::<PieceLabel>().is_err());
        assert!("(1,0,2)".parse::<PieceLabel>().is_err());
    }

    #[test]
    fn admissibility_rules() {
        assert!(PieceLabel::new(vec![1, 0, 1], None).is_admissible());
        assert!(!PieceLabel::new(vec![1, 1], None).is_admissible());
        assert!(!PieceLabel::new(vec![0, 0, 1], None).is_admissible());
        assert!(PieceLabel::new(vec![0, 2], None).is_admissible());
    }
}
