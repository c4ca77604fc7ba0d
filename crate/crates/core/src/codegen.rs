//! Generator matrix construction and the two IDA validity conditions.
//!
//! Families:
//! - `cauchy`: m×n, entry (i, j) = 1 / (x_i + y_j).
//! - `vandermonde`: the m×(m+n) matrix with entry (i, j) = a_j^i.
//! - `rs_strong`: `C⁻¹·D` where `(C | D)` is the Vandermonde matrix above.
//! - `explicit`: a caller-supplied m×n matrix.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{IdaError, Result};
use crate::gf::{FieldElement, FieldWidth};
use crate::matrix::{parse_hex, GfMatrix};
use crate::subsets::{binomial, combinations};

/// Exhaustive condition-2 checks stop at this many column subsets.
pub const EXHAUSTIVE_SUBSET_LIMIT: u64 = 1_000_000;
const SAMPLED_SUBSETS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Cauchy,
    Vandermonde,
    RsStrong,
    Explicit,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Cauchy => "cauchy",
            Family::Vandermonde => "vandermonde",
            Family::RsStrong => "rs_strong",
            Family::Explicit => "explicit",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = IdaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cauchy" => Ok(Family::Cauchy),
            "vandermonde" => Ok(Family::Vandermonde),
            "rs_strong" => Ok(Family::RsStrong),
            "explicit" => Ok(Family::Explicit),
            other => Err(IdaError::InvalidSpec(format!("unknown code family `{other}`"))),
        }
    }
}

/// A constructible description of a generator matrix.
///
/// `points` holds x₁..x_m, y₁..y_n for Cauchy, a₁..a_{m+n} for the
/// Vandermonde families, and the row-major entries for `explicit`. An empty
/// list means "use the default points" wherever defaults exist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub width: FieldWidth,
    pub m: usize,
    pub n: usize,
    pub points: Vec<FieldElement>,
}

impl GeneratorSpec {
    pub fn new(family: Family, width: FieldWidth, m: usize, n: usize) -> Self {
        GeneratorSpec { family, width, m, n, points: Vec::new() }
    }

    pub fn with_points(mut self, points: Vec<FieldElement>) -> Self {
        self.points = points;
        self
    }

    pub fn cauchy(width: FieldWidth, m: usize, n: usize) -> Self {
        Self::new(Family::Cauchy, width, m, n)
    }

    pub fn vandermonde(width: FieldWidth, m: usize, n: usize) -> Self {
        Self::new(Family::Vandermonde, width, m, n)
    }

    pub fn rs_strong(width: FieldWidth, m: usize, n: usize) -> Self {
        Self::new(Family::RsStrong, width, m, n)
    }

    pub fn explicit(g: &GfMatrix) -> Self {
        Self::new(Family::Explicit, g.width(), g.rows(), g.cols()).with_points(g.data().to_vec())
    }

    /// Columns of the matrix `build` produces.
    pub fn output_cols(&self) -> usize {
        match self.family {
            Family::Vandermonde => self.m + self.n,
            _ => self.n,
        }
    }

    fn default_points(&self) -> Vec<FieldElement> {
        let count = self.m + self.n;
        match self.family {
            // x_i = i - 1, y_j = m + j - 1 and a_i = i - 1 all read as 0..m+n
            Family::Cauchy | Family::Vandermonde | Family::RsStrong => (0..count as u32).map(|v| v as u16).collect(),
            Family::Explicit => Vec::new(),
        }
    }

    /// The same spec with defaults filled in.
    pub fn resolved(&self) -> GeneratorSpec {
        let mut out = self.clone();
        if out.points.is_empty() {
            out.points = self.default_points();
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(IdaError::InvalidSpec(msg));
        let spec = self.resolved();
        if spec.m < 1 {
            return bad("m must be at least 1".into());
        }
        match spec.family {
            Family::Vandermonde if spec.n < 1 => return bad("n must be at least 1".into()),
            Family::Vandermonde => {}
            _ if spec.m >= spec.n => return bad(format!("m < n violated (m = {}, n = {})", spec.m, spec.n)),
            _ => {}
        }
        let order = spec.width.order() as usize;
        if spec.family != Family::Explicit && spec.m + spec.n > order {
            return bad(format!("m + n = {} exceeds field size {order}", spec.m + spec.n));
        }
        if let Some(&p) = spec.points.iter().find(|&&p| p as usize >= order) {
            return bad(format!("point {p:#x} outside GF(2^{})", spec.width));
        }
        let expected = match spec.family {
            Family::Explicit => spec.m * spec.n,
            _ => spec.m + spec.n,
        };
        if spec.points.len() != expected {
            return bad(format!("expected {expected} points for {}, got {}", spec.family, spec.points.len()));
        }
        match spec.family {
            Family::Cauchy => {
                let (xs, ys) = spec.points.split_at(spec.m);
                if let Some(d) = first_duplicate(xs) {
                    return bad(format!("cauchy x points not distinct ({d:#x} repeats)"));
                }
                if let Some(d) = first_duplicate(ys) {
                    return bad(format!("cauchy y points not distinct ({d:#x} repeats)"));
                }
                for &x in xs {
                    if let Some(&y) = ys.iter().find(|&&y| x ^ y == 0) {
                        return bad(format!("cauchy x_i + y_j = 0 for x = y = {y:#x}"));
                    }
                }
            }
            Family::Vandermonde | Family::RsStrong => {
                if let Some(d) = first_duplicate(&spec.points) {
                    return bad(format!("vandermonde points not distinct ({d:#x} repeats)"));
                }
            }
            Family::Explicit => {}
        }
        Ok(())
    }

    pub fn build(&self) -> Result<GfMatrix> {
        self.validate()?;
        let spec = self.resolved();
        let f = spec.width.field();
        match spec.family {
            Family::Cauchy => {
                let (xs, ys) = spec.points.split_at(spec.m);
                let mut g = GfMatrix::zeros(spec.width, spec.m, spec.n);
                for (i, &x) in xs.iter().enumerate() {
                    for (j, &y) in ys.iter().enumerate() {
                        g.set(i, j, f.inv(f.add(x, y))?);
                    }
                }
                Ok(g)
            }
            Family::Vandermonde => Ok(vandermonde(spec.width, spec.m, &spec.points)),
            Family::RsStrong => strongify(&vandermonde(spec.width, spec.m, &spec.points), spec.m),
            Family::Explicit => GfMatrix::from_vec(spec.width, spec.m, spec.n, spec.points),
        }
    }
}

fn first_duplicate(values: &[FieldElement]) -> Option<FieldElement> {
    let mut seen = std::collections::HashSet::new();
    values.iter().copied().find(|v| !seen.insert(*v))
}

/// m×len(points) matrix with entry (i, j) = points[j]^i.
pub fn vandermonde(width: FieldWidth, m: usize, points: &[FieldElement]) -> GfMatrix {
    let f = width.field();
    let mut g = GfMatrix::zeros(width, m, points.len());
    for i in 0..m {
        for (j, &a) in points.iter().enumerate() {
            g.set(i, j, f.pow(a, i as u64));
        }
    }
    g
}

/// Canonical text: `family:w:m:n:p1,p2,...` with hex points.
impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.width.hex_digits();
        let points: Vec<String> = self.points.iter().map(|p| format!("{p:0digits$x}")).collect();
        write!(f, "{}:{}:{}:{}:{}", self.family, self.width, self.m, self.n, points.join(","))
    }
}

impl FromStr for GeneratorSpec {
    type Err = IdaError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        if !(4..=5).contains(&parts.len()) {
            return Err(IdaError::Parse(format!("generator spec `{s}` is not family:w:m:n:points")));
        }
        let num = |name: &str, v: &str| -> Result<usize> {
            v.parse().map_err(|e| IdaError::Parse(format!("bad {name} `{v}`: {e}")))
        };
        let family: Family = parts[0].parse()?;
        let width = FieldWidth::try_from(num("field width", parts[1])? as u32)?;
        let m = num("m", parts[2])?;
        let n = num("n", parts[3])?;
        let points = match parts.get(4) {
            Some(list) if !list.is_empty() => list.split(',').map(parse_hex).collect::<Result<Vec<_>>>()?,
            _ => Vec::new(),
        };
        Ok(GeneratorSpec { family, width, m, n, points })
    }
}

/// Outcome of checking the two IDA conditions on an m×n generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityReport {
    /// First column equal to a column of the m×m identity.
    pub identity_column: Option<usize>,
    /// First m-column subset found singular.
    pub singular_subset: Option<Vec<usize>>,
    pub subsets_checked: u64,
    /// True when condition 2 was checked on a random sample only.
    pub sampled: bool,
}

impl ValidityReport {
    pub fn condition1(&self) -> bool {
        self.identity_column.is_none()
    }

    pub fn condition2(&self) -> bool {
        self.singular_subset.is_none()
    }

    pub fn is_valid(&self) -> bool {
        self.condition1() && self.condition2()
    }

    pub fn into_result(self) -> Result<()> {
        if let Some(c) = self.identity_column {
            return Err(IdaError::InvalidGenerator(format!(
                "condition 1 violated: column {c} is an identity column"
            )));
        }
        if let Some(cols) = self.singular_subset {
            return Err(IdaError::InvalidGenerator(format!(
                "condition 2 violated: columns {cols:?} form a singular matrix"
            )));
        }
        Ok(())
    }
}

fn is_unit_column(g: &GfMatrix, c: usize) -> bool {
    let col = g.column(c);
    col.iter().filter(|&&v| v != 0).count() == 1 && col.contains(&1)
}

/// First m-subset of columns that is singular, exhaustive up to
/// [`EXHAUSTIVE_SUBSET_LIMIT`] subsets and sampled beyond.
fn find_singular_subset(g: &GfMatrix) -> (Option<Vec<usize>>, u64, bool) {
    let (m, n) = (g.rows(), g.cols());
    let rows: Vec<usize> = (0..m).collect();
    let total = binomial(n, m);
    if total <= EXHAUSTIVE_SUBSET_LIMIT {
        let mut checked = 0;
        for cols in combinations(n, m) {
            checked += 1;
            if !g.select(&rows, &cols).is_nonsingular() {
                return (Some(cols), checked, false);
            }
        }
        return (None, checked, false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for checked in 1..=SAMPLED_SUBSETS as u64 {
        let mut cols = sample(&mut rng, n, m).into_vec();
        cols.sort_unstable();
        if !g.select(&rows, &cols).is_nonsingular() {
            return (Some(cols), checked, true);
        }
    }
    (None, SAMPLED_SUBSETS as u64, true)
}

pub fn check_validity(g: &GfMatrix) -> Result<ValidityReport> {
    if g.rows() >= g.cols() {
        return Err(IdaError::InvalidGenerator(format!(
            "generator must have fewer rows than columns (got {}x{})",
            g.rows(),
            g.cols()
        )));
    }
    let identity_column = (0..g.cols()).find(|&c| is_unit_column(g, c));
    let (singular_subset, subsets_checked, sampled) = find_singular_subset(g);
    Ok(ValidityReport { identity_column, singular_subset, subsets_checked, sampled })
}

/// Validity check that fails with a descriptive error.
pub fn ensure_valid(g: &GfMatrix) -> Result<()> {
    check_validity(g)?.into_result()
}

/// Turn an m-of-(m+n) MDS generator `(C | D)` into the m-of-n generator
/// `C⁻¹·D`.
pub fn strongify(g_wide: &GfMatrix, m: usize) -> Result<GfMatrix> {
    if g_wide.rows() != m || g_wide.cols() <= m {
        return Err(IdaError::InvalidGenerator(format!(
            "strongify needs an {m}x(m+n) matrix with n >= 1, got {}x{}",
            g_wide.rows(),
            g_wide.cols()
        )));
    }
    if let (Some(columns), _, _) = find_singular_subset(g_wide) {
        return Err(IdaError::NotMds { columns });
    }
    let all_rows: Vec<usize> = (0..m).collect();
    let info: Vec<usize> = (0..m).collect();
    let rest: Vec<usize> = (m..g_wide.cols()).collect();
    let c = g_wide.select(&all_rows, &info);
    let d = g_wide.select(&all_rows, &rest);
    let c_inv = c.invert().expect("information set of an MDS matrix is invertible");
    c_inv.matmul(&d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldWidth::{W4, W8};

    fn m8(rows: &[&[u16]]) -> GfMatrix {
        GfMatrix::from_rows(W8, rows).unwrap()
    }

    /// 2x2 determinant ad + bc in characteristic 2.
    fn det2(g: &GfMatrix, a: usize, b: usize) -> u16 {
        let f = g.field();
        f.add(f.mul(g.get(0, a), g.get(1, b)), f.mul(g.get(0, b), g.get(1, a)))
    }

    #[test]
    fn cauchy_m_not_less_than_n_rejected() {
        let err = GeneratorSpec::cauchy(W8, 1, 1).build().unwrap_err();
        assert!(err.to_string().contains("m < n"), "{err}");
    }

    #[test]
    fn vandermonde_rows_are_powers() {
        let g = GeneratorSpec::vandermonde(W8, 2, 1).with_points(vec![1, 2, 3]).build().unwrap();
        assert_eq!(g, m8(&[&[1, 1, 1], &[1, 2, 3]]));
        let pts: Vec<u16> = (0..9).map(|i| i * 7 + 1).collect();
        let g = GeneratorSpec::vandermonde(W8, 4, 5).with_points(pts.clone()).build().unwrap();
        let f = g.field();
        for i in 0..4 {
            for (j, &a) in pts.iter().enumerate() {
                assert_eq!(g.get(i, j), f.pow(a, i as u64));
            }
        }
    }

    #[test]
    fn cauchy_entry_matches_inverse() {
        let g = GeneratorSpec::cauchy(W8, 2, 3).with_points(vec![1, 2, 3, 4, 5]).build().unwrap();
        assert_eq!(g.get(0, 0), 0x8D);
        let f = g.field();
        for (i, x) in [1u16, 2].into_iter().enumerate() {
            for (j, y) in [3u16, 4, 5].into_iter().enumerate() {
                assert_eq!(f.mul(g.get(i, j), x ^ y), 1);
            }
        }
    }

    #[test]
    fn generator_validation_errors() {
        let err = |s: GeneratorSpec| s.validate().unwrap_err().to_string();
        assert!(err(GeneratorSpec::cauchy(W8, 2, 3).with_points(vec![1, 1, 3, 4, 5])).contains("x points"));
        assert!(err(GeneratorSpec::cauchy(W8, 2, 3).with_points(vec![1, 2, 3, 3, 5])).contains("y points"));
        assert!(err(GeneratorSpec::cauchy(W8, 2, 3).with_points(vec![1, 2, 3, 2, 5])).contains("x_i + y_j"));
        assert!(err(GeneratorSpec::cauchy(W8, 2, 3).with_points(vec![1, 2, 3])).contains("expected 5"));
        assert!(err(GeneratorSpec::rs_strong(W8, 2, 3).with_points(vec![1, 2, 3, 4, 4])).contains("distinct"));
        assert!(err(GeneratorSpec::cauchy(W4, 8, 9)).contains("exceeds field size"));
        assert!(err(GeneratorSpec::cauchy(W4, 2, 3).with_points(vec![1, 2, 3, 4, 0x10])).contains("outside"));
        assert!(err(GeneratorSpec::new(Family::Explicit, W8, 2, 3)).contains("expected 6"));
        assert!(GeneratorSpec::cauchy(W4, 8, 8).validate().is_err());
        assert!(GeneratorSpec::cauchy(W4, 6, 10).validate().is_ok());
    }

    #[test]
    fn generator_text_round_trip() {
        let spec = GeneratorSpec::cauchy(W8, 3, 5).resolved();
        let text = spec.to_string();
        assert_eq!(text, "cauchy:8:3:5:00,01,02,03,04,05,06,07");
        assert_eq!(text.parse::<GeneratorSpec>().unwrap(), spec);
        let short: GeneratorSpec = "rs_strong:16:2:3:".parse().unwrap();
        assert!(short.points.is_empty());
        assert_eq!(short.resolved().to_string(), "rs_strong:16:2:3:0000,0001,0002,0003,0004");
        let g = m8(&[&[1, 1, 2], &[1, 2, 0]]);
        let e = GeneratorSpec::explicit(&g);
        assert_eq!(e.to_string(), "explicit:8:2:3:01,01,02,01,02,00");
        assert_eq!(e.to_string().parse::<GeneratorSpec>().unwrap().build().unwrap(), g);
        assert!("bogus:8:2:3:".parse::<GeneratorSpec>().is_err());
        assert!("cauchy:8:2".parse::<GeneratorSpec>().is_err());
    }

    #[test]
    fn identity_column_fails_condition1() {
        let g = m8(&[&[2, 1, 3], &[3, 0, 5]]);
        let rep = check_validity(&g).unwrap();
        assert_eq!(rep.identity_column, Some(1));
        let err = rep.into_result().unwrap_err().to_string();
        assert!(err.contains("identity column"), "{err}");
        // a scaled unit column is not an identity column
        let g = m8(&[&[2, 1, 3], &[3, 2, 5]]);
        assert_eq!(check_validity(&g).unwrap().identity_column, None);
    }

    #[test]
    fn weak_fixture_is_valid() {
        let g = m8(&[&[1, 1, 2], &[1, 2, 0]]);
        assert_eq!([det2(&g, 0, 1), det2(&g, 0, 2), det2(&g, 1, 2)], [3, 2, 4]);
        let rep = check_validity(&g).unwrap();
        assert!(rep.is_valid());
        assert_eq!(rep.subsets_checked, 3);
        assert!(!rep.sampled);
    }

    #[test]
    fn singular_subset_reported() {
        let g = m8(&[&[1, 2, 3, 2], &[2, 3, 1, 3]]);
        let rep = check_validity(&g).unwrap();
        assert_eq!(rep.singular_subset, Some(vec![1, 3]));
        assert!(rep.into_result().unwrap_err().to_string().contains("condition 2"));
        assert!(check_validity(&GfMatrix::identity(W8, 2)).is_err());
    }

    #[test]
    fn cauchy_outputs_valid() {
        for m in 2..=5 {
            for n in m + 1..=10 - m {
                let g = GeneratorSpec::cauchy(W8, m, n).build().unwrap();
                assert!(check_validity(&g).unwrap().is_valid(), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn default_cauchy_m1_has_identity_column() {
        let g = GeneratorSpec::cauchy(W8, 1, 3).build().unwrap();
        assert_eq!(check_validity(&g).unwrap().identity_column, Some(0));
    }

    #[test]
    fn strongify_systematic_returns_d() {
        let d = GeneratorSpec::cauchy(W8, 3, 4).build().unwrap();
        let wide = GfMatrix::identity(W8, 3).hstack(&d).unwrap();
        assert_eq!(strongify(&wide, 3).unwrap(), d);
    }

    #[test]
    fn strongify_change_of_basis() {
        let wide = GeneratorSpec::vandermonde(W8, 2, 3).with_points(vec![1, 2, 3, 4, 5]).build().unwrap();
        let g = strongify(&wide, 2).unwrap();
        assert_eq!((g.rows(), g.cols()), (2, 3));
        let c = wide.submatrix(&[0, 1], &[0, 1]).unwrap();
        let d = wide.submatrix(&[0, 1], &[2, 3, 4]).unwrap();
        assert_eq!(c.matmul(&g).unwrap(), d);
        assert!(check_validity(&g).unwrap().is_valid());
    }

    #[test]
    fn strongify_rejects_non_mds() {
        let wide = m8(&[&[1, 0, 1, 2], &[0, 1, 1, 2]]);
        assert_eq!(strongify(&wide, 2), Err(IdaError::NotMds { columns: vec![2, 3] }));
        assert!(strongify(&GfMatrix::identity(W8, 2), 2).is_err());
    }

    #[test]
    fn rs_strong_matches_manual_strongify() {
        let spec = GeneratorSpec::rs_strong(W8, 3, 4);
        let wide = GeneratorSpec::vandermonde(W8, 3, 4).build().unwrap();
        assert_eq!(spec.build().unwrap(), strongify(&wide, 3).unwrap());
    }

    #[test]
    fn sampled_check_for_large_subset_counts() {
        // C(40, 20) subsets is beyond the exhaustive bound
        let g = GeneratorSpec::cauchy(FieldWidth::W8, 20, 40).build().unwrap();
        let rep = check_validity(&g).unwrap();
        assert!(rep.sampled);
        assert!(rep.is_valid());
        assert_eq!(rep.subsets_checked, SAMPLED_SUBSETS as u64);
    }
}
