//! Local search behind the refined rules.
//!
//! Candidate squares are pushed from the extreme points of every block of the
//! 4×4 grid toward an empty neighbouring strip, in a few standard sizes plus
//! the largest empty size. Recursive solutions of the quadrants and of the
//! sixteen small cells compete with them as blocks. The best compatible
//! selection is found by exact independent-set search.

use std::collections::BTreeSet;

use num_traits::Zero;

use super::{QuadCell, Sol, Solver};
use crate::geometry::{int, max_empty_square_in, AnchoredBox, Corner, Point, Rational, Rect};
use crate::mwis::{self, ConflictGraph};

const NODE_LIMIT: u64 = 200_000;
/// Standard sides in sixteenths of the cell side.
const SIZES: [i64; 5] = [2, 4, 5, 6, 8];

enum Item {
    Square(AnchoredBox),
    Block { rect: Rect, members: Vec<usize>, sol: Sol },
}

impl Solver<'_> {
    pub(super) fn local_search(&mut self, cell: &QuadCell, idx: &[usize]) -> Sol {
        let grid: Vec<(usize, usize)> = idx.iter().map(|&i| cell.grid_index(&self.pts[i], 4)).collect();
        let inside = |c0: usize, c1: usize, r0: usize, r1: usize| -> Vec<usize> {
            (0..idx.len())
                .filter(|&k| (c0..c1).contains(&grid[k].0) && (r0..r1).contains(&grid[k].1))
                .map(|k| idx[k])
                .collect()
        };

        // Anchors: extreme points of grid blocks facing an empty strip.
        let mut pushes: BTreeSet<(usize, Corner)> = BTreeSet::new();
        for c0 in 0..4 {
            for c1 in c0 + 1..=4 {
                for r0 in 0..4 {
                    for r1 in r0 + 1..=4 {
                        let members = inside(c0, c1, r0, r1);
                        if members.is_empty() {
                            continue;
                        }
                        let dirs: [(i8, i8, bool); 4] = [
                            (1, 0, c1 < 4 && inside(c1, c1 + 1, r0, r1).is_empty()),
                            (-1, 0, c0 > 0 && inside(c0 - 1, c0, r0, r1).is_empty()),
                            (0, 1, r1 < 4 && inside(c0, c1, r1, r1 + 1).is_empty()),
                            (0, -1, r0 > 0 && inside(c0, c1, r0 - 1, r0).is_empty()),
                        ];
                        for (dx, dy, ok) in dirs {
                            if !ok {
                                continue;
                            }
                            let key = |i: usize| {
                                let p = &self.pts[i];
                                if dx != 0 {
                                    &p.x * int(dx as i64)
                                } else {
                                    &p.y * int(dy as i64)
                                }
                            };
                            let p = *members
                                .iter()
                                .max_by(|&&a, &&b| key(a).cmp(&key(b)).then(b.cmp(&a)))
                                .expect("nonempty");
                            let corners = if dx != 0 {
                                [Corner::from_dirs(dx, 1), Corner::from_dirs(dx, -1)]
                            } else {
                                [Corner::from_dirs(1, dy), Corner::from_dirs(-1, dy)]
                            };
                            for c in corners {
                                pushes.insert((p, c));
                            }
                        }
                    }
                }
            }
        }

        let local: Vec<Point> = idx.iter().map(|&i| self.pts[i].clone()).collect();
        let bounds = cell.rect();
        let unit = &cell.side / int(16);
        let min_side = &unit * int(2);
        let mut items: Vec<Item> = Vec::new();
        for &(p, c) in &pushes {
            let m = max_empty_square_in(&self.pts[p], c, &local, &[], &bounds);
            let mut sides: Vec<Rational> = SIZES.iter().map(|&k| &unit * int(k)).filter(|s| *s < m).collect();
            sides.push(m);
            for s in sides {
                if s >= min_side {
                    items.push(Item::Square(AnchoredBox::square(p, c, &self.pts[p], &s)));
                }
            }
        }

        // Blocks: quadrants and small cells solved recursively.
        let mut blocks: Vec<(QuadCell, Vec<usize>)> = Vec::new();
        for q in 1..=4 {
            let (c, r) = super::rules::offset(q);
            blocks.push((cell.child(q), inside(2 * c, 2 * c + 2, 2 * r, 2 * r + 2)));
        }
        for c in 0..4 {
            for r in 0..4 {
                blocks.push((cell.sub(c, r, 4), inside(c, c + 1, r, r + 1)));
            }
        }
        for (bc, members) in blocks {
            if members.is_empty() {
                continue;
            }
            let sol = self.solve(&bc, &members);
            if !sol.area.is_zero() {
                items.push(Item::Block { rect: bc.rect(), members, sol });
            }
        }

        let n_pts = self.pts.len();
        let weights: Vec<Rational> = items
            .iter()
            .map(|it| match it {
                Item::Square(b) => b.area(),
                Item::Block { sol, .. } => sol.area.clone(),
            })
            .collect();
        let groups: Vec<usize> = items
            .iter()
            .enumerate()
            .map(|(k, it)| match it {
                Item::Square(b) => b.anchor,
                Item::Block { .. } => n_pts + k,
            })
            .collect();
        let mut g = ConflictGraph::new(weights, groups);
        for a in 0..items.len() {
            for b in a + 1..items.len() {
                let clash = match (&items[a], &items[b]) {
                    (Item::Square(s), Item::Square(t)) => s.rect.interiors_overlap(&t.rect),
                    (Item::Square(s), Item::Block { rect, members, .. })
                    | (Item::Block { rect, members, .. }, Item::Square(s)) => {
                        members.contains(&s.anchor) || s.rect.interiors_overlap(rect)
                    }
                    (Item::Block { rect: r, .. }, Item::Block { rect: t, .. }) => r.interiors_overlap(t),
                };
                if clash {
                    g.add_conflict(a, b);
                }
            }
        }
        let res = mwis::solve(&g, Some(NODE_LIMIT), None);
        if !res.optimal {
            self.stats.truncated_searches += 1;
        }
        let mut out = Sol::default();
        for k in res.chosen {
            match &items[k] {
                Item::Square(b) => out.push(b.clone()),
                Item::Block { sol, .. } => out.extend(sol.clone()),
            }
        }
        out
    }
}
