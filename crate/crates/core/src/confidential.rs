//! Confidentiality analysis of an IDA generator matrix.
//!
//! A segment S_i "leaks" from a piece subset J when the unit vector e_i lies
//! in the column span of G restricted to J: some linear combination of the
//! eavesdropped pieces then equals S_i exactly.
//!
//! - [`detect_weak`] searches for a submatrix A (m′×n′, m′, n′ < m) of column
//!   rank r with n′ − r = m − m′ > 0. Such a block exists exactly when some
//!   segment leaks from fewer than m pieces.
//! - [`certify_strong`] checks the sufficient condition that every square
//!   submatrix of G is nonsingular.
//! - [`attack`] reconstructs every segment that leaks from a given subset.

use std::fmt::{self, Write as _};

use serde::{Serialize, Serializer};

use crate::codegen::ensure_valid;
use crate::error::{IdaError, Result};
use crate::gf::FieldElement;
use crate::matrix::GfMatrix;
use crate::subsets::{binomial, combinations, subsets_lex};

/// Bound on submatrix rank computations per search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_submatrices: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_submatrices: 1_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Weak,
    StrongCertified,
    StrongByExhaustion,
    Indeterminate,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Weak => "weak",
            Verdict::StrongCertified => "strong_certified",
            Verdict::StrongByExhaustion => "strong_by_exhaustion",
            Verdict::Indeterminate => "indeterminate",
        }
    }

    pub fn is_strong(self) -> bool {
        matches!(self, Verdict::StrongCertified | Verdict::StrongByExhaustion)
    }
}

fn hex_matrix<S: Serializer>(m: &GfMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    let digits = m.width().hex_digits();
    let rows: Vec<Vec<String>> = (0..m.rows())
        .map(|r| m.row(r).iter().map(|v| format!("{v:0digits$x}")).collect())
        .collect();
    rows.serialize(s)
}

/// The rank-deficient block that makes an IDA weak, plus everything needed
/// to run the elimination attack.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeakWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub rank_r: usize,
    pub k: usize,
    pub dependent_cols: Vec<usize>,
    pub basis_cols: Vec<usize>,
    /// r×k: dependent columns of A = basis columns of A · B.
    #[serde(serialize_with = "hex_matrix")]
    pub coeffs_b: GfMatrix,
    pub recoverable_segments: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareLocation {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    NotRun,
    Vacuous,
    Exhaustive,
    BoundExceeded,
}

impl fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchStatus::NotRun => "not_run",
            SearchStatus::Vacuous => "vacuous",
            SearchStatus::Exhaustive => "exhaustive",
            SearchStatus::BoundExceeded => "bound_exceeded",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateStatus {
    NotRun,
    Passed,
    Failed,
    Skipped,
}

impl fmt::Display for CertificateStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificateStatus::NotRun => "not_run",
            CertificateStatus::Passed => "passed",
            CertificateStatus::Failed => "failed",
            CertificateStatus::Skipped => "skipped",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateScope {
    pub m: usize,
    pub n: usize,
    pub bound: u64,
    pub weak_search: SearchStatus,
    pub submatrices_examined: u64,
    pub square_certificate: CertificateStatus,
    pub squares_examined: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfidentialityReport {
    pub verdict: Verdict,
    pub witness: Option<WeakWitness>,
    pub singular_square: Option<SquareLocation>,
    pub certificate_scope: CertificateScope,
}

impl ConfidentialityReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Human-readable rendering with the witness block marked in the matrix.
    pub fn render_text(&self, g: &GfMatrix) -> String {
        let scope = &self.certificate_scope;
        let mut out = String::new();
        let _ = writeln!(out, "verdict: {}", self.verdict.name());
        let _ = writeln!(
            out,
            "scope: m={} n={} bound={} weak_search={} ({} submatrices) square_certificate={} ({} squares)",
            scope.m,
            scope.n,
            scope.bound,
            scope.weak_search,
            scope.submatrices_examined,
            scope.square_certificate,
            scope.squares_examined
        );
        if let Some(sq) = &self.singular_square {
            let _ = writeln!(out, "singular square submatrix: rows {:?} cols {:?}", sq.rows, sq.cols);
        }
        let digits = g.width().hex_digits();
        if let Some(w) = &self.witness {
            let _ = writeln!(
                out,
                "witness: rows {:?} cols {:?} rank r={} k={} basis {:?} dependent {:?}",
                w.rows, w.cols, w.rank_r, w.k, w.basis_cols, w.dependent_cols
            );
            let _ = writeln!(out, "recoverable segments: {:?}", w.recoverable_segments);
            let _ = writeln!(out, "B ({}x{}):", w.coeffs_b.rows(), w.coeffs_b.cols());
            for r in 0..w.coeffs_b.rows() {
                let line: Vec<String> = w.coeffs_b.row(r).iter().map(|v| format!("{v:0digits$x}")).collect();
                let _ = writeln!(out, "  {}", line.join(" "));
            }
        }
        let _ = writeln!(out, "generator ({}x{}, GF(2^{})):", g.rows(), g.cols(), g.width());
        for r in 0..g.rows() {
            let mut line = String::from("  ");
            for c in 0..g.cols() {
                let marked = self
                    .witness
                    .as_ref()
                    .is_some_and(|w| w.rows.contains(&r) && w.cols.contains(&c));
                let v = g.get(r, c);
                if marked {
                    let _ = write!(line, "[{v:0digits$x}]");
                } else {
                    let _ = write!(line, " {v:0digits$x} ");
                }
            }
            let _ = writeln!(out, "{}", line.trim_end());
        }
        out
    }
}

fn weak_search_size(m: usize, n: usize) -> u64 {
    let rows: u64 = (1..m).map(|k| binomial(m, k)).fold(0, u64::saturating_add);
    let cols: u64 = (1..m).map(|k| binomial(n, k)).fold(0, u64::saturating_add);
    rows.saturating_mul(cols)
}

fn square_search_size(m: usize, n: usize) -> u64 {
    (1..=m.min(n))
        .map(|k| binomial(m, k).saturating_mul(binomial(n, k)))
        .fold(0, u64::saturating_add)
}

fn scope(g: &GfMatrix, limits: SearchLimits) -> CertificateScope {
    CertificateScope {
        m: g.rows(),
        n: g.cols(),
        bound: limits.max_submatrices,
        weak_search: SearchStatus::NotRun,
        submatrices_examined: 0,
        square_certificate: CertificateStatus::NotRun,
        squares_examined: 0,
    }
}

fn build_witness(g: &GfMatrix, rows: Vec<usize>, cols: Vec<usize>, rank_r: usize) -> WeakWitness {
    let block = g.select(&rows, &cols);
    let rel = block
        .column_relation()
        .expect("witness block is rank deficient");
    let m = g.rows();
    WeakWitness {
        k: cols.len() - rank_r,
        rank_r,
        dependent_cols: rel.dependent.iter().map(|&i| cols[i]).collect(),
        basis_cols: rel.basis.iter().map(|&i| cols[i]).collect(),
        coeffs_b: rel.coeffs,
        recoverable_segments: (0..m).filter(|i| !rows.contains(i)).collect(),
        rows,
        cols,
    }
}

/// Exhaustive search for the weak-confidentiality block.
pub fn detect_weak(g: &GfMatrix, limits: SearchLimits) -> Result<ConfidentialityReport> {
    ensure_valid(g)?;
    let (m, n) = (g.rows(), g.cols());
    let mut scope = scope(g, limits);
    let report = |verdict, witness, scope| ConfidentialityReport {
        verdict,
        witness,
        singular_square: None,
        certificate_scope: scope,
    };
    if m == 1 {
        scope.weak_search = SearchStatus::Vacuous;
        return Ok(report(Verdict::StrongByExhaustion, None, scope));
    }
    if weak_search_size(m, n) > limits.max_submatrices {
        scope.weak_search = SearchStatus::BoundExceeded;
        return Ok(report(Verdict::Indeterminate, None, scope));
    }
    scope.weak_search = SearchStatus::Exhaustive;
    let col_sets = subsets_lex(n, m - 1);
    for m_prime in 1..m {
        let need = m - m_prime;
        for rows in combinations(m, m_prime) {
            for cols in col_sets.iter().filter(|c| c.len() >= need) {
                scope.submatrices_examined += 1;
                let r = g.select(&rows, cols).rank();
                let deficiency = cols.len() - r;
                assert!(
                    deficiency <= need,
                    "n' - r > m - m' at rows {rows:?} cols {cols:?}; contradicts condition 2"
                );
                if deficiency == need {
                    let witness = build_witness(g, rows, cols.clone(), r);
                    return Ok(report(Verdict::Weak, Some(witness), scope));
                }
            }
        }
    }
    Ok(report(Verdict::StrongByExhaustion, None, scope))
}

/// Check that every square submatrix is nonsingular; fall back to
/// [`detect_weak`] when it is not.
pub fn certify_strong(g: &GfMatrix, limits: SearchLimits) -> Result<ConfidentialityReport> {
    ensure_valid(g)?;
    let (m, n) = (g.rows(), g.cols());
    if square_search_size(m, n) > limits.max_submatrices {
        let mut rep = detect_weak(g, limits)?;
        rep.certificate_scope.square_certificate = CertificateStatus::Skipped;
        return Ok(rep);
    }
    let mut examined = 0;
    for size in 1..=m.min(n) {
        for rows in combinations(m, size) {
            for cols in combinations(n, size) {
                examined += 1;
                if !g.select(&rows, &cols).is_nonsingular() {
                    let mut rep = detect_weak(g, limits)?;
                    rep.singular_square = Some(SquareLocation { rows, cols });
                    rep.certificate_scope.square_certificate = CertificateStatus::Failed;
                    rep.certificate_scope.squares_examined = examined;
                    return Ok(rep);
                }
            }
        }
    }
    let mut scope = scope(g, limits);
    scope.square_certificate = CertificateStatus::Passed;
    scope.squares_examined = examined;
    Ok(ConfidentialityReport {
        verdict: Verdict::StrongCertified,
        witness: None,
        singular_square: None,
        certificate_scope: scope,
    })
}

fn unit_column(g: &GfMatrix, i: usize) -> GfMatrix {
    let mut e = GfMatrix::zeros(g.width(), g.rows(), 1);
    e.set(i, 0, 1);
    e
}

/// Segments whose unit vector lies in the span of the columns `piece_subset`.
/// Rank test only; independent of the solver used by [`attack`].
pub fn recoverable_oracle(g: &GfMatrix, piece_subset: &[usize]) -> Vec<usize> {
    let mut cols = piece_subset.to_vec();
    cols.sort_unstable();
    cols.dedup();
    if cols.is_empty() {
        return Vec::new();
    }
    let all_rows: Vec<usize> = (0..g.rows()).collect();
    let gj = g.select(&all_rows, &cols);
    let base = gj.rank();
    (0..g.rows())
        .filter(|&i| gj.hstack(&unit_column(g, i)).expect("same rows").rank() == base)
        .collect()
}

fn combine(pieces: &[&[FieldElement]], coeffs: &[FieldElement], g: &GfMatrix) -> Vec<FieldElement> {
    let len = pieces.first().map_or(0, |p| p.len());
    let mut out = vec![0; len];
    for (p, &c) in pieces.iter().zip(coeffs) {
        g.field().mul_acc(&mut out, p, c);
    }
    out
}

/// Rebuild every segment that leaks from the eavesdropped pieces.
///
/// Input is `(piece index, payload)`; output is `(segment index, payload)`
/// sorted by segment.
pub fn attack(
    g: &GfMatrix,
    eavesdropped: &[(usize, Vec<FieldElement>)],
) -> Result<Vec<(usize, Vec<FieldElement>)>> {
    let (m, n) = (g.rows(), g.cols());
    if eavesdropped.len() >= m {
        return Err(IdaError::TooManyPieces { have: eavesdropped.len(), m });
    }
    let mut sorted: Vec<&(usize, Vec<FieldElement>)> = eavesdropped.iter().collect();
    sorted.sort_by_key(|(j, _)| *j);
    for pair in sorted.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(IdaError::DuplicatePiece { index: pair[0].0 });
        }
    }
    if let Some((j, _)) = sorted.iter().find(|(j, _)| *j >= n) {
        return Err(IdaError::PieceIndexOutOfRange { index: *j, n });
    }
    let Some(first) = sorted.first() else {
        return Ok(Vec::new());
    };
    let len = first.1.len();
    if let Some((_, p)) = sorted.iter().find(|(_, p)| p.len() != len) {
        return Err(IdaError::PayloadLength { expected: len, got: p.len() });
    }
    if let Some(&bad) = sorted.iter().flat_map(|(_, p)| p.iter()).find(|&&v| !g.field().contains(v)) {
        g.field().check(bad.into())?;
    }

    let cols: Vec<usize> = sorted.iter().map(|(j, _)| *j).collect();
    let all_rows: Vec<usize> = (0..m).collect();
    let gj = g.select(&all_rows, &cols);
    // keep an independent subset so the solver sees full column rank
    let basis = gj.row_echelon().pivots;
    let gb = gj.select(&all_rows, &basis);
    let payloads: Vec<&[FieldElement]> = basis.iter().map(|&b| sorted[b].1.as_slice()).collect();

    let mut leaked = Vec::new();
    for i in 0..m {
        match gb.solve(&unit_column(g, i)) {
            Ok(c) => leaked.push((i, combine(&payloads, c.data(), g))),
            Err(IdaError::Inconsistent) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(leaked)
}

impl WeakWitness {
    /// The elimination route: strip the witness rows' segments with
    /// F̃ = F_dep − F_basis·B, then solve the k×k system left over for the
    /// recoverable segments.
    ///
    /// `pieces` must hold the payload of every column in `self.cols`.
    pub fn eliminate(
        &self,
        g: &GfMatrix,
        pieces: &[(usize, Vec<FieldElement>)],
    ) -> Result<Vec<(usize, Vec<FieldElement>)>> {
        let f = g.field();
        let payload = |j: usize| -> Result<&[FieldElement]> {
            pieces
                .iter()
                .find(|(idx, _)| *idx == j)
                .map(|(_, p)| p.as_slice())
                .ok_or_else(|| IdaError::InvalidIndices(format!("missing payload for piece {j}")))
        };
        let len = payload(self.cols[0])?.len();

        // F̃_d = F_d − Σ_b B[b][d] · F_b   (subtraction is xor)
        let mut reduced = Vec::with_capacity(self.k);
        for (d, &dep) in self.dependent_cols.iter().enumerate() {
            let mut acc = payload(dep)?.to_vec();
            if acc.len() != len {
                return Err(IdaError::PayloadLength { expected: len, got: acc.len() });
            }
            for (b, &basis) in self.basis_cols.iter().enumerate() {
                f.mul_acc(&mut acc, payload(basis)?, self.coeffs_b.get(b, d));
            }
            reduced.push(acc);
        }

        // F̃_d = Σ_o S_o · M[o][d] with M = G[out, dep] − G[out, basis]·B
        let out = &self.recoverable_segments;
        let g_dep = g.select(out, &self.dependent_cols);
        let g_basis = g.select(out, &self.basis_cols);
        let mix = g_dep.add(&g_basis.matmul(&self.coeffs_b)?)?;
        let unmix = mix.transpose().invert()?;

        let mut segments = Vec::with_capacity(self.k);
        for (s, &seg) in out.iter().enumerate() {
            let rows: Vec<&[FieldElement]> = reduced.iter().map(Vec::as_slice).collect();
            segments.push((seg, combine(&rows, unmix.row(s), g)));
        }
        Ok(segments)
    }
}
