//! Latin squares and transversal decompositions.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatinSquare {
    n: usize,
    cells: Vec<usize>,
}

impl LatinSquare {
    /// Row-major cells; every row and column must be a permutation of `0..n`.
    pub fn new(n: usize, cells: Vec<usize>) -> Result<LatinSquare> {
        if cells.len() != n * n {
            return Err(Error::malformed(format!("{} cells for a square of order {n}", cells.len())));
        }
        let sq = LatinSquare { n, cells };
        for i in 0..n {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for j in 0..n {
                for (seen, s) in [(&mut row, sq.get(i, j)), (&mut col, sq.get(j, i))] {
                    if s >= n || std::mem::replace(&mut seen[s], true) {
                        return Err(Error::malformed(format!("line {i} is not a permutation of 0..{n}")));
                    }
                }
            }
        }
        Ok(sq)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> usize {
        self.cells[row * self.n + col]
    }
}

impl fmt::Display for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// The addition table of `Z_n`.
pub fn cyclic_square(n: usize) -> LatinSquare {
    let cells = (0..n * n).map(|c| (c / n + c % n) % n).collect();
    LatinSquare { n, cells }
}

pub fn are_orthogonal(a: &LatinSquare, b: &LatinSquare) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::precondition(format!("orders {} and {} differ", a.n, b.n)));
    }
    let n = a.n;
    let mut seen = vec![false; n * n];
    for c in 0..n * n {
        if std::mem::replace(&mut seen[a.cells[c] * n + b.cells[c]], true) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `n` cells, one per row, one per column and one per symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transversal {
    cells: Vec<(usize, usize)>,
}

impl Transversal {
    pub fn new(square: &LatinSquare, cells: Vec<(usize, usize)>) -> Result<Transversal> {
        let n = square.n;
        if cells.len() != n {
            return Err(Error::malformed(format!("transversal needs {n} cells, got {}", cells.len())));
        }
        let (mut rows, mut cols, mut syms) = (vec![false; n], vec![false; n], vec![false; n]);
        for &(r, c) in &cells {
            if r >= n || c >= n {
                return Err(Error::malformed(format!("cell ({r},{c}) outside the square")));
            }
            let s = square.get(r, c);
            if std::mem::replace(&mut rows[r], true)
                || std::mem::replace(&mut cols[c], true)
                || std::mem::replace(&mut syms[s], true)
            {
                return Err(Error::malformed(format!("cell ({r},{c}) repeats a row, column or symbol")));
            }
        }
        Ok(Transversal { cells })
    }

    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }
}

/// Splits the square into `n` disjoint transversals, or `None` if that is
/// impossible.
///
/// For cyclic squares of odd order the broken diagonals
/// `{(i, i + c)}` for `c = 0..n` are returned directly, in that order.
/// Anything else goes through a backtracking search.
pub fn transversal_decomposition(square: &LatinSquare) -> Option<Vec<Transversal>> {
    let n = square.n;
    if n % 2 == 1 && *square == cyclic_square(n) {
        return Some(
            (0..n)
                .map(|c| Transversal { cells: (0..n).map(|i| (i, (i + c) % n)).collect() })
                .collect(),
        );
    }
    DecompositionSearch::new(square).run()
}

/// Assigns each cell a transversal index so that every index class picks one
/// cell per row, column and symbol. Cells are filled row by row; transversal
/// indices are introduced in increasing order to break the symmetry between
/// them.
struct DecompositionSearch<'a> {
    square: &'a LatinSquare,
    // used[t] bitmasks over columns and symbols; rows are implicit
    col_used: Vec<Vec<bool>>,
    sym_used: Vec<Vec<bool>>,
    // per row, which transversals already took a cell in it
    row_used: Vec<Vec<bool>>,
    assignment: Vec<usize>,
}

impl<'a> DecompositionSearch<'a> {
    fn new(square: &'a LatinSquare) -> Self {
        let n = square.n;
        DecompositionSearch {
            square,
            col_used: vec![vec![false; n]; n],
            sym_used: vec![vec![false; n]; n],
            row_used: vec![vec![false; n]; n],
            assignment: vec![usize::MAX; n * n],
        }
    }

    fn run(mut self) -> Option<Vec<Transversal>> {
        let n = self.square.n;
        if n == 0 {
            return Some(Vec::new());
        }
        // row 0 fixes transversal t to cell (0, t)
        for t in 0..n {
            self.place(0, t, t);
        }
        if !self.fill(n) {
            return None;
        }
        let mut out = vec![Vec::with_capacity(n); n];
        for (c, &t) in self.assignment.iter().enumerate() {
            out[t].push((c / n, c % n));
        }
        Some(out.into_iter().map(|cells| Transversal { cells }).collect())
    }

    fn place(&mut self, r: usize, c: usize, t: usize) {
        let s = self.square.get(r, c);
        self.col_used[t][c] = true;
        self.sym_used[t][s] = true;
        self.row_used[r][t] = true;
        self.assignment[r * self.square.n + c] = t;
    }

    fn unplace(&mut self, r: usize, c: usize, t: usize) {
        let s = self.square.get(r, c);
        self.col_used[t][c] = false;
        self.sym_used[t][s] = false;
        self.row_used[r][t] = false;
        self.assignment[r * self.square.n + c] = usize::MAX;
    }

    fn fill(&mut self, n: usize) -> bool {
        let Some(cell) = self.assignment.iter().position(|&t| t == usize::MAX) else {
            return true;
        };
        let (r, c) = (cell / n, cell % n);
        let s = self.square.get(r, c);
        for t in 0..n {
            if self.row_used[r][t] || self.col_used[t][c] || self.sym_used[t][s] {
                continue;
            }
            self.place(r, c, t);
            if self.fill(n) {
                return true;
            }
            self.unplace(r, c, t);
        }
        false
    }
}
