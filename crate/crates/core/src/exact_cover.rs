//! Exact cover by dancing links.
//!
//! Every item must be covered by exactly one chosen option. Items are
//! chosen smallest-first (lowest index on ties) and options in input order,
//! so the first solution found is deterministic.

use crate::error::Result;
use crate::search::Budget;

pub struct ExactCover {
    // node arrays; nodes 0..=items are the header row, 0 is the root
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    column: Vec<usize>,
    option_of: Vec<usize>,
    size: Vec<usize>,
}

impl ExactCover {
    /// `options[o]` lists the items option `o` covers; items are `0..items`.
    pub fn new(items: usize, options: &[Vec<usize>]) -> ExactCover {
        let headers = items + 1;
        let mut dl = ExactCover {
            left: (0..headers).map(|i| if i == 0 { items } else { i - 1 }).collect(),
            right: (0..headers).map(|i| if i == items { 0 } else { i + 1 }).collect(),
            up: (0..headers).collect(),
            down: (0..headers).collect(),
            column: (0..headers).collect(),
            option_of: vec![usize::MAX; headers],
            size: vec![0; headers],
        };
        for (o, opt) in options.iter().enumerate() {
            let first = dl.left.len();
            for (pos, &item) in opt.iter().enumerate() {
                let col = item + 1;
                let node = dl.left.len();
                let prev = if pos == 0 { node } else { node - 1 };
                dl.left.push(prev);
                dl.right.push(first);
                dl.right[prev] = node;
                dl.left[first] = node;
                dl.up.push(dl.up[col]);
                dl.down.push(col);
                let above = dl.up[col];
                dl.down[above] = node;
                dl.up[col] = node;
                dl.column.push(col);
                dl.option_of.push(o);
                dl.size[col] += 1;
            }
        }
        dl
    }

    fn cover(&mut self, c: usize) {
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.column[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                self.size[self.column[j]] += 1;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = c;
        self.left[r] = c;
    }

    /// Covers the items of the given options before searching, as if they
    /// had already been chosen.
    pub fn preselect(&mut self, options: &[usize]) {
        for &o in options {
            let node = (0..self.option_of.len()).find(|&n| self.option_of[n] == o).expect("option exists");
            self.cover(self.column[node]);
            let mut j = self.right[node];
            while j != node {
                self.cover(self.column[j]);
                j = self.right[j];
            }
        }
    }

    /// First exact cover, as option indices in the order chosen, or `None`.
    pub fn solve(&mut self, budget: u64, context: &str) -> Result<Option<Vec<usize>>> {
        let mut budget = Budget::new(budget);
        let mut chosen = Vec::new();
        let found = self.search(&mut chosen, &mut budget);
        budget.check(context)?;
        Ok(found.then(|| chosen.iter().map(|&n| self.option_of[n]).collect()))
    }

    fn search(&mut self, chosen: &mut Vec<usize>, budget: &mut Budget) -> bool {
        if self.right[0] == 0 {
            return true;
        }
        if !budget.tick() {
            return false;
        }
        let mut c = self.right[0];
        let mut j = self.right[c];
        while j != 0 {
            if self.size[j] < self.size[c] {
                c = j;
            }
            j = self.right[j];
        }
        if self.size[c] == 0 {
            return false;
        }
        self.cover(c);
        let mut r = self.down[c];
        while r != c {
            chosen.push(r);
            let mut j = self.right[r];
            while j != r {
                self.cover(self.column[j]);
                j = self.right[j];
            }
            if self.search(chosen, budget) {
                return true;
            }
            let mut j = self.left[r];
            while j != r {
                self.uncover(self.column[j]);
                j = self.left[j];
            }
            chosen.pop();
            if budget.exhausted() {
                break;
            }
            r = self.down[r];
        }
        self.uncover(c);
        false
    }
}

/// Convenience wrapper: first exact cover of `items` by `options`.
pub fn exact_cover(items: usize, options: &[Vec<usize>], budget: u64, context: &str) -> Result<Option<Vec<usize>>> {
    ExactCover::new(items, options).solve(budget, context)
}
