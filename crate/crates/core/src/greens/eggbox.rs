//! Egg-box layout: each D-class as a grid of R-classes (rows) by L-classes (columns).

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Result;

use super::GreenContext;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EggBoxClass {
    pub rows: usize,
    pub cols: usize,
    /// `cells[r][c]` lists member ids in R-class `r` and L-class `c`.
    pub cells: Vec<Vec<Vec<usize>>>,
    pub idempotents: Vec<usize>,
    pub regular: bool,
}

impl EggBoxClass {
    pub fn size(&self) -> usize {
        self.cells.iter().flatten().map(Vec::len).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EggBox {
    pub members: usize,
    pub classes: Vec<EggBoxClass>,
}

pub(crate) fn build(ctx: &GreenContext) -> Result<EggBox> {
    let ens = ctx.ensemble();
    let t = ctx.tables()?;
    let n = ens.len();
    let idempotent: Vec<bool> = (0..n).map(|i| ens.mul(i, i) == i).collect();
    let mut class_of = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for a in 0..n {
        if class_of[a] != usize::MAX {
            continue;
        }
        let id = groups.len();
        let group: Vec<usize> = (a..n)
            .filter(|&b| class_of[b] == usize::MAX && t.d_middle(a, b).is_some())
            .collect();
        for &b in &group {
            class_of[b] = id;
        }
        groups.push(group);
    }
    let classes = groups
        .into_iter()
        .map(|group| {
            let mut rows: HashMap<usize, usize> = HashMap::new();
            let mut cols: HashMap<usize, usize> = HashMap::new();
            for &m in &group {
                let next = rows.len();
                rows.entry(t.r_class(m)).or_insert(next);
                let next = cols.len();
                cols.entry(t.l_class(m)).or_insert(next);
            }
            let mut cells = vec![vec![Vec::new(); cols.len()]; rows.len()];
            for &m in &group {
                cells[rows[&t.r_class(m)]][cols[&t.l_class(m)]].push(m);
            }
            let idempotents: Vec<usize> =
                group.iter().copied().filter(|&m| idempotent[m]).collect();
            EggBoxClass {
                rows: rows.len(),
                cols: cols.len(),
                cells,
                regular: !idempotents.is_empty(),
                idempotents,
            }
        })
        .collect();
    Ok(EggBox {
        members: n,
        classes,
    })
}

impl EggBox {
    /// Plain-text grid; idempotents are marked with `*`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, class) in self.classes.iter().enumerate() {
            let _ = writeln!(
                out,
                "D-class {k}: {} R-classes x {} L-classes, {} members{}",
                class.rows,
                class.cols,
                class.size(),
                if class.regular { ", regular" } else { "" }
            );
            let labels: Vec<Vec<String>> = class
                .cells
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|cell| {
                            cell.iter()
                                .map(|m| {
                                    let star = if class.idempotents.contains(m) {
                                        "*"
                                    } else {
                                        ""
                                    };
                                    format!("{m}{star}")
                                })
                                .collect::<Vec<_>>()
                                .join(" ")
                        })
                        .collect()
                })
                .collect();
            let width = (0..class.cols)
                .map(|c| labels.iter().map(|r| r[c].len()).max().unwrap_or(0))
                .collect::<Vec<_>>();
            for row in &labels {
                out.push_str("  |");
                for (c, cell) in row.iter().enumerate() {
                    let _ = write!(out, " {cell:<w$} |", w = width[c]);
                }
                out.push('\n');
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use crate::ensemble::{Ensemble, IndexSemigroup, Instance};
    use crate::greens::GreenContext;
    use crate::partition::Partition;

    #[test]
    fn single_block_boxes_follow_rank() {
        let p = Partition::single_block(3).unwrap();
        let ens =
            Ensemble::new(Instance::new(p, IndexSemigroup::full(1).unwrap()).unwrap()).unwrap();
        let ctx = GreenContext::new(&ens).unwrap();
        let b = ctx.egg_box().unwrap();
        // T_3 has one D-class per rank
        assert_eq!(b.classes.len(), 3);
        let mut shapes: Vec<(usize, usize, usize)> = b
            .classes
            .iter()
            .map(|c| (c.rows, c.cols, c.size()))
            .collect();
        shapes.sort();
        assert_eq!(shapes, vec![(1, 1, 6), (1, 3, 3), (3, 3, 18)]);
        assert!(b.classes.iter().all(|c| c.regular));
        let text = b.to_text();
        assert!(text.contains("D-class 0"));
        assert!(text.contains('*'));
    }
}
