//! Dense matrices over GF(2^w).
//!
//! All elimination routines pivot on the first nonzero entry and scan
//! columns left to right, so ranks, bases and coefficient matrices are
//! deterministic.

use std::fmt;

use crate::error::{IdaError, Result};
use crate::gf::{Field, FieldElement, FieldWidth};

#[derive(Clone, PartialEq, Eq)]
pub struct GfMatrix {
    field: &'static Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

/// Result of reducing a matrix to reduced row echelon form.
#[derive(Debug, Clone)]
pub struct RowEchelon {
    pub reduced: GfMatrix,
    /// Pivot column of each nonzero row, increasing.
    pub pivots: Vec<usize>,
}

/// A linear relation among the columns of a matrix: the columns at
/// `dependent` equal the columns at `basis` times `coeffs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnRelation {
    pub dependent: Vec<usize>,
    pub basis: Vec<usize>,
    /// `basis.len() × dependent.len()`
    pub coeffs: GfMatrix,
}

impl GfMatrix {
    pub fn zeros(width: FieldWidth, rows: usize, cols: usize) -> Self {
        GfMatrix {
            field: Field::get(width),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(width: FieldWidth, size: usize) -> Self {
        let mut m = Self::zeros(width, size, size);
        for i in 0..size {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_vec(width: FieldWidth, rows: usize, cols: usize, data: Vec<FieldElement>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(IdaError::Parse(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        let field = Field::get(width);
        for &v in &data {
            field.check(v.into())?;
        }
        Ok(GfMatrix { field, rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[FieldElement]>>(width: FieldWidth, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(IdaError::Parse("ragged rows".into()));
        }
        let data = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Self::from_vec(width, rows.len(), cols, data)
    }

    pub fn diagonal(width: FieldWidth, diag: &[FieldElement]) -> Result<Self> {
        let mut m = Self::zeros(width, diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.field.check(d.into())?;
            m.set(i, i, d);
        }
        Ok(m)
    }

    pub fn field(&self) -> &'static Field {
        self.field
    }

    pub fn width(&self) -> FieldWidth {
        self.field.width()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[FieldElement] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        debug_assert!(self.field.contains(v));
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> GfMatrix {
        let mut t = GfMatrix::zeros(self.width(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    fn same_field(&self, other: &GfMatrix) -> Result<()> {
        if self.field != other.field {
            return Err(IdaError::FieldMismatch);
        }
        Ok(())
    }

    fn mismatch(&self, op: &'static str, other: &GfMatrix) -> IdaError {
        IdaError::DimensionMismatch {
            op,
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }

    pub fn matmul(&self, other: &GfMatrix) -> Result<GfMatrix> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(self.mismatch("matmul", other));
        }
        let mut out = GfMatrix::zeros(self.width(), self.rows, other.cols);
        for i in 0..self.rows {
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                self.field.mul_acc(dst, other.row(k), self.get(i, k));
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &GfMatrix) -> Result<GfMatrix> {
        self.same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(self.mismatch("add", other));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a ^ b).collect();
        Ok(GfMatrix { data, ..self.clone() })
    }

    /// Horizontal concatenation `(self | other)`.
    pub fn hstack(&self, other: &GfMatrix) -> Result<GfMatrix> {
        self.same_field(other)?;
        if self.rows != other.rows {
            return Err(self.mismatch("hstack", other));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Ok(GfMatrix { field: self.field, rows: self.rows, cols, data })
    }

    /// Gauss-Jordan elimination to reduced row echelon form.
    pub fn row_echelon(&self) -> RowEchelon {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(p) = (lead..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            m.swap_rows(p, lead);
            let scale = f.inv(m.get(lead, c)).expect("pivot is nonzero");
            for v in &mut m.data[lead * m.cols..(lead + 1) * m.cols] {
                *v = f.mul(*v, scale);
            }
            let pivot_row = m.row(lead).to_vec();
            for r in 0..m.rows {
                let factor = m.get(r, c);
                if r != lead && factor != 0 {
                    let cols = m.cols;
                    f.mul_acc(&mut m.data[r * cols..(r + 1) * cols], &pivot_row, factor);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        RowEchelon { reduced: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.row_echelon().pivots.len()
    }

    pub fn is_nonsingular(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn invert(&self) -> Result<GfMatrix> {
        if self.rows != self.cols {
            return Err(self.mismatch("invert", self));
        }
        match self.solve(&GfMatrix::identity(self.width(), self.rows)) {
            Ok(x) => Ok(x),
            Err(IdaError::RankDeficient { rank, .. }) => Err(IdaError::Singular { rank, size: self.rows }),
            Err(e) => Err(e),
        }
    }

    /// Solve `self · x = rhs` for a matrix with full column rank.
    pub fn solve(&self, rhs: &GfMatrix) -> Result<GfMatrix> {
        self.same_field(rhs)?;
        if rhs.rows != self.rows {
            return Err(self.mismatch("solve", rhs));
        }
        let aug = self.hstack(rhs)?.row_echelon();
        let rank = aug.pivots.iter().take_while(|&&p| p < self.cols).count();
        if rank < self.cols {
            return Err(IdaError::RankDeficient { rank, cols: self.cols });
        }
        // Any pivot landing in the rhs block means 0 = nonzero.
        if aug.pivots.len() > rank {
            return Err(IdaError::Inconsistent);
        }
        let mut x = GfMatrix::zeros(self.width(), self.cols, rhs.cols);
        for r in 0..self.cols {
            for c in 0..rhs.cols {
                x.set(r, c, aug.reduced.get(r, self.cols + c));
            }
        }
        Ok(x)
    }

    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Result<GfMatrix> {
        check_indices("row", row_idx, self.rows)?;
        check_indices("column", col_idx, self.cols)?;
        Ok(self.select(row_idx, col_idx))
    }

    /// Unchecked selection; indices must be in range.
    pub(crate) fn select(&self, row_idx: &[usize], col_idx: &[usize]) -> GfMatrix {
        let mut data = Vec::with_capacity(row_idx.len() * col_idx.len());
        for &r in row_idx {
            data.extend(col_idx.iter().map(|&c| self.get(r, c)));
        }
        GfMatrix { field: self.field, rows: row_idx.len(), cols: col_idx.len(), data }
    }

    pub fn select_columns(&self, col_idx: &[usize]) -> Result<GfMatrix> {
        let all: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&all, col_idx)
    }

    /// Express the dependent columns through the lexicographically first
    /// independent set of columns.
    pub fn column_relation(&self) -> Result<ColumnRelation> {
        let ech = self.row_echelon();
        if ech.pivots.len() == self.cols {
            return Err(IdaError::NoDependentColumns);
        }
        let dependent: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        let mut coeffs = GfMatrix::zeros(self.width(), ech.pivots.len(), dependent.len());
        for (i, _) in ech.pivots.iter().enumerate() {
            for (j, &d) in dependent.iter().enumerate() {
                coeffs.set(i, j, ech.reduced.get(i, d));
            }
        }
        Ok(ColumnRelation { dependent, basis: ech.pivots, coeffs })
    }

    /// Parse the text form: `w rows cols` then `rows·cols` hex entries.
    pub fn parse_text(text: &str) -> Result<GfMatrix> {
        let mut tokens = text.split_whitespace();
        let mut header = |name: &str| -> Result<usize> {
            tokens
                .next()
                .ok_or_else(|| IdaError::Parse(format!("missing {name}")))?
                .parse::<usize>()
                .map_err(|e| IdaError::Parse(format!("bad {name}: {e}")))
        };
        let w = header("field width")?;
        let rows = header("row count")?;
        let cols = header("column count")?;
        let width = FieldWidth::try_from(w as u32)?;
        let data = tokens.map(parse_hex).collect::<Result<Vec<_>>>()?;
        Self::from_vec(width, rows, cols, data)
    }

    pub fn to_text(&self) -> String {
        let digits = self.width().hex_digits();
        let mut out = format!("{} {} {}\n", self.width(), self.rows, self.cols);
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(|v| format!("{v:0digits$x}")).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

pub(crate) fn parse_hex(token: &str) -> Result<FieldElement> {
    let digits = token
        .strip_prefix("0x")
        .or_else(|| token.strip_prefix("0X"))
        .unwrap_or(token);
    u16::from_str_radix(digits, 16).map_err(|e| IdaError::Parse(format!("bad hex entry `{token}`: {e}")))
}

fn check_indices(kind: &str, idx: &[usize], bound: usize) -> Result<()> {
    if let Some(&bad) = idx.iter().find(|&&i| i >= bound) {
        return Err(IdaError::InvalidIndices(format!("{kind} index {bad} out of range (< {bound})")));
    }
    if idx.windows(2).any(|w| w[0] >= w[1]) {
        return Err(IdaError::InvalidIndices(format!("{kind} indices {idx:?} not strictly increasing")));
    }
    Ok(())
}

impl fmt::Debug for GfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GfMatrix(GF(2^{}) {}x{}) {:x?}", self.width(), self.rows, self.cols, self.data)
    }
}

impl fmt::Display for GfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
