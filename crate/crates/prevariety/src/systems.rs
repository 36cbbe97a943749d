//! Benchmark polynomial systems and the text format for user input.
//!
//! Only monomial supports matter here: coefficients never influence the
//! prevariety, so generators and the parser discard them. The one place
//! coefficients are honored is inside the n-body and n-vortex expansion,
//! where identical monomials with opposite signs cancel exactly and
//! therefore change the support.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use crate::kernel::IntVector;
use crate::newton::Support;
use crate::{Error, Result};

/// A polynomial system reduced to what the prevariety depends on: named
/// variables and one monomial support per polynomial.
#[derive(Clone, Debug)]
pub struct PolynomialSystem {
    names: Vec<String>,
    supports: Vec<Support>,
    label: String,
}

impl PolynomialSystem {
    pub fn new(names: Vec<String>, supports: Vec<Support>, label: String) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidArgument("no variables".into()));
        }
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n) {
                return Err(Error::InvalidArgument(format!("duplicate variable {n}")));
            }
        }
        if supports.is_empty() {
            return Err(Error::InvalidArgument("system has no polynomials".into()));
        }
        for s in &supports {
            if s.dim() != names.len() {
                return Err(Error::DimensionMismatch {
                    expected: names.len(),
                    got: s.dim(),
                });
            }
        }
        Ok(PolynomialSystem {
            names,
            supports,
            label,
        })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn supports(&self) -> &[Support] {
        &self.supports
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

fn support_from_rows(dim: usize, rows: Vec<Vec<i64>>) -> Support {
    Support::new(dim, rows.iter().map(|r| IntVector::from_i64(r)).collect())
        .expect("generated supports are well-formed")
}

/// The cyclic n-roots system: for each degree `d` in `1..n`, the sum over
/// `j` of the products `x_j x_{j+1} ... x_{j+d-1}` with indices mod `n`,
/// plus the polynomial `x_0 x_1 ... x_{n-1} - 1`.
pub fn gen_cyclic(n: usize) -> Result<PolynomialSystem> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "cyclic system needs n >= 2, got {n}"
        )));
    }
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut supports = Vec::with_capacity(n);
    for degree in 1..n {
        let mut rows = Vec::with_capacity(n);
        for j in 0..n {
            let mut row = vec![0i64; n];
            for k in 0..degree {
                row[(j + k) % n] = 1;
            }
            rows.push(row);
        }
        supports.push(support_from_rows(n, rows));
    }
    supports.push(support_from_rows(n, vec![vec![1; n], vec![0; n]]));
    PolynomialSystem::new(names, supports, format!("cyclic-{n}"))
}

/// Sparse Laurent polynomial: exponent vector to coefficient, zero
/// coefficients never stored.
struct Laurent(BTreeMap<Vec<i64>, i64>);

impl Laurent {
    fn new() -> Self {
        Laurent(BTreeMap::new())
    }

    fn add_term(&mut self, mono: Vec<i64>, coeff: i64) {
        use std::collections::btree_map::Entry;
        match self.0.entry(mono) {
            Entry::Vacant(slot) => {
                if coeff != 0 {
                    slot.insert(coeff);
                }
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if *slot.get() == 0 {
                    slot.remove();
                }
            }
        }
    }

    /// Support after multiplying through by the monomial `shift`.
    fn shifted_support(self, dim: usize, shift: &[i64]) -> Support {
        let rows: Vec<Vec<i64>> = self
            .0
            .keys()
            .map(|m| {
                let row: Vec<i64> = m.iter().zip(shift).map(|(a, s)| a + s).collect();
                assert!(
                    row.iter().all(|e| *e >= 0),
                    "clearing factor must cancel every negative exponent"
                );
                row
            })
            .collect();
        support_from_rows(dim, rows)
    }
}

/// Index of the distance variable `x_ab` (unordered, `1 <= a < b <= n`) in
/// the lexicographic pair order (1,2), (1,3), ..., (2,3), ...
fn pair_index(n: usize, a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    debug_assert!(1 <= a && a < b && b <= n);
    (a - 1) * n - a * (a - 1) / 2 + (b - a) - 1
}

/// Albouy-Chenciner equations for pairwise distances, with denominators
/// cleared. For each pair `i < j` the equation is
///
///   sum over k of (x_ik^-e - 1)(x_jk^2 - x_ik^2 - x_ij^2)
///               + (x_jk^-e - 1)(x_ik^2 - x_jk^2 - x_ij^2)
///
/// under the conventions `x_kk = 0` and `(x_kk^-e - 1) = 0`, multiplied by
/// the clearing factor `prod_{k != i} x_ik^e * prod_{k != j} x_jk^e`. The
/// `+x_ik^2` and `-x_ik^2` cross terms cancel exactly, which shrinks the
/// support; the expansion is done over exact integers so that cancellation
/// is honored.
fn albouy_chenciner(n: usize, e: i64, label: String) -> Result<PolynomialSystem> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "distance system needs n >= 3, got {n}"
        )));
    }
    let dim = n * (n - 1) / 2;
    let mut names = Vec::with_capacity(dim);
    for a in 1..=n {
        for b in a + 1..=n {
            names.push(format!("x{a}{b}"));
        }
    }
    let mono = |powers: &[(usize, i64)]| -> Vec<i64> {
        let mut m = vec![0i64; dim];
        for &(idx, p) in powers {
            m[idx] += p;
        }
        m
    };
    let mut supports = Vec::with_capacity(dim);
    for i in 1..=n {
        for j in i + 1..=n {
            let ij = pair_index(n, i, j);
            let mut poly = Laurent::new();
            // k = i and k = j each contribute (x_ij^-e - 1)(-2 x_ij^2).
            poly.add_term(mono(&[(ij, 2 - e)]), -4);
            poly.add_term(mono(&[(ij, 2)]), 4);
            for k in 1..=n {
                if k == i || k == j {
                    continue;
                }
                let ik = pair_index(n, i, k);
                let jk = pair_index(n, j, k);
                poly.add_term(mono(&[(ik, -e), (jk, 2)]), 1);
                poly.add_term(mono(&[(ik, 2 - e)]), -1);
                poly.add_term(mono(&[(ik, -e), (ij, 2)]), -1);
                poly.add_term(mono(&[(jk, -e), (ik, 2)]), 1);
                poly.add_term(mono(&[(jk, 2 - e)]), -1);
                poly.add_term(mono(&[(jk, -e), (ij, 2)]), -1);
                poly.add_term(mono(&[(ij, 2)]), 2);
            }
            let mut clearing = vec![0i64; dim];
            for k in 1..=n {
                if k != i {
                    clearing[pair_index(n, i, k)] += e;
                }
                if k != j {
                    clearing[pair_index(n, j, k)] += e;
                }
            }
            supports.push(poly.shifted_support(dim, &clearing));
        }
    }
    PolynomialSystem::new(names, supports, label)
}

/// Central configurations of the equal-mass n-body problem.
pub fn gen_nbody(n: usize) -> Result<PolynomialSystem> {
    albouy_chenciner(n, 3, format!("nbody-{n}"))
}

/// Relative equilibria of the n-vortex problem.
pub fn gen_nvortex(n: usize) -> Result<PolynomialSystem> {
    albouy_chenciner(n, 2, format!("nvortex-{n}"))
}

/// The 4x4 minors of a 5x5 matrix of variables: 25 polynomials (one per
/// choice of omitted row and column), each supported on the 24 permutation
/// monomials of the corresponding determinant.
pub fn gen_minors() -> PolynomialSystem {
    let dim = 25;
    let names: Vec<String> = (1..=5)
        .flat_map(|r| (1..=5).map(move |c| format!("x{r}{c}")))
        .collect();
    let var = |r: usize, c: usize| (r - 1) * 5 + (c - 1);
    let mut supports = Vec::with_capacity(25);
    for skip_row in 1..=5 {
        for skip_col in 1..=5 {
            let rows: Vec<usize> = (1..=5).filter(|r| *r != skip_row).collect();
            let cols: Vec<usize> = (1..=5).filter(|c| *c != skip_col).collect();
            let mut points = Vec::with_capacity(24);
            let mut perm = [0usize, 1, 2, 3];
            loop {
                let mut row = vec![0i64; dim];
                for (ri, &pi) in perm.iter().enumerate() {
                    row[var(rows[ri], cols[pi])] = 1;
                }
                points.push(row);
                if !next_permutation(&mut perm) {
                    break;
                }
            }
            supports.push(support_from_rows(dim, points));
        }
    }
    PolynomialSystem::new(names, supports, "minors".into())
        .expect("generated system is well-formed")
}

/// Advance to the next lexicographic permutation; false after the last.
fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_names(rest: &str, line: usize) -> Result<Vec<String>> {
    let tokens: Vec<&str> = rest.split_whitespace().collect();
    if tokens.is_empty() {
        return Err(parse_err(line, "empty variables header"));
    }
    if tokens.len() == 1 {
        if let Ok(n) = tokens[0].parse::<usize>() {
            if n == 0 {
                return Err(parse_err(line, "need at least one variable"));
            }
            return Ok((0..n).map(|i| format!("x{i}")).collect());
        }
    }
    let mut names = Vec::with_capacity(tokens.len());
    let mut seen = HashSet::new();
    for t in tokens {
        let valid = t.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            && t.chars().next().is_some_and(|c| c.is_ascii_alphabetic());
        if !valid {
            return Err(parse_err(line, format!("invalid variable name '{t}'")));
        }
        if !seen.insert(t) {
            return Err(parse_err(line, format!("duplicate variable '{t}'")));
        }
        names.push(t.to_string());
    }
    Ok(names)
}

fn parse_tuple_support(rest: &str, dim: usize, line: usize) -> Result<Vec<IntVector>> {
    let mut points = Vec::new();
    let mut chars = rest.char_indices().peekable();
    while let Some((start, c)) = chars.next() {
        if c.is_whitespace() {
            continue;
        }
        if c != '(' {
            return Err(parse_err(line, format!("expected '(' at column {start}")));
        }
        let mut end = None;
        for (i, c2) in chars.by_ref() {
            if c2 == ')' {
                end = Some(i);
                break;
            }
        }
        let end = end.ok_or_else(|| parse_err(line, "unclosed '('"))?;
        let inner = &rest[start + 1..end];
        let mut coords = Vec::new();
        for piece in inner.split(',') {
            let piece = piece.trim();
            let v: i64 = piece
                .parse()
                .map_err(|_| parse_err(line, format!("bad exponent '{piece}'")))?;
            if v < 0 {
                return Err(parse_err(line, format!("negative exponent {v}")));
            }
            coords.push(v);
        }
        if coords.len() != dim {
            return Err(parse_err(
                line,
                format!("tuple has {} entries, expected {dim}", coords.len()),
            ));
        }
        points.push(IntVector::from_i64(&coords));
    }
    Ok(points)
}

fn parse_symbolic_support(rest: &str, names: &[String], line: usize) -> Result<Vec<IntVector>> {
    let mut points = Vec::new();
    for term in rest.split(['+', '-']) {
        let term = term.trim();
        if term.is_empty() {
            continue;
        }
        let mut exps = vec![0i64; names.len()];
        for factor in term.split('*') {
            let factor = factor.trim();
            if factor.is_empty() {
                return Err(parse_err(line, "empty factor"));
            }
            if factor.chars().all(|c| c.is_ascii_digit()) {
                continue;
            }
            let (name, power) = match factor.split_once('^') {
                None => (factor, 1i64),
                Some((name, p)) => {
                    let power: i64 = p
                        .trim()
                        .parse()
                        .map_err(|_| parse_err(line, format!("bad exponent '{p}'")))?;
                    if power < 0 {
                        return Err(parse_err(line, format!("negative exponent {power}")));
                    }
                    (name.trim(), power)
                }
            };
            let idx = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| parse_err(line, format!("unknown variable '{name}'")))?;
            exps[idx] += power;
        }
        points.push(IntVector::from_i64(&exps));
    }
    Ok(points)
}

/// Parse the version-1 input format: '#' comment lines, one
/// `variables: <n>` or `variables: <name> ...` header, then one
/// `poly: (e,...) (e,...)` or `poly: <symbolic>` line per polynomial.
pub fn parse_system(text: &str) -> Result<PolynomialSystem> {
    let mut names: Option<Vec<String>> = None;
    let mut supports: Vec<Support> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("variables:") {
            if names.is_some() {
                return Err(parse_err(line, "second variables header"));
            }
            names = Some(parse_names(rest, line)?);
        } else if let Some(rest) = trimmed.strip_prefix("poly:") {
            let names = names
                .as_ref()
                .ok_or_else(|| parse_err(line, "poly before variables header"))?;
            let rest = rest.trim();
            let raw_points = if rest.starts_with('(') {
                parse_tuple_support(rest, names.len(), line)?
            } else {
                parse_symbolic_support(rest, names, line)?
            };
            let mut seen = HashSet::new();
            let points: Vec<IntVector> = raw_points
                .into_iter()
                .filter(|p| seen.insert(p.clone()))
                .collect();
            let support = Support::new(names.len(), points)
                .map_err(|e| parse_err(line, e.to_string()))?;
            supports.push(support);
        } else {
            return Err(parse_err(line, format!("unrecognized line '{trimmed}'")));
        }
    }
    let names = names.ok_or_else(|| parse_err(1, "missing 'variables:' header"))?;
    if supports.is_empty() {
        return Err(parse_err(last_line.max(1), "system has no polynomials"));
    }
    PolynomialSystem::new(names, supports, "input".into())
}

/// Emit a system in the input format; `parse_system` inverts this up to the
/// label.
pub fn format_system(sys: &PolynomialSystem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {}", sys.label());
    let _ = writeln!(out, "variables: {}", sys.names().join(" "));
    for s in sys.supports() {
        let points: Vec<String> = s.points().iter().map(|p| p.to_string()).collect();
        let _ = writeln!(out, "poly: {}", points.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic4_support_sizes_and_degree2() {
        let sys = gen_cyclic(4).unwrap();
        assert_eq!(sys.dim(), 4);
        let sizes: Vec<usize> = sys.supports().iter().map(|s| s.points().len()).collect();
        assert_eq!(sizes, vec![4, 4, 4, 2]);
        let mut got: Vec<IntVector> = sys.supports()[1].points().to_vec();
        got.sort();
        let mut want = vec![
            IntVector::from_i64(&[1, 1, 0, 0]),
            IntVector::from_i64(&[0, 1, 1, 0]),
            IntVector::from_i64(&[0, 0, 1, 1]),
            IntVector::from_i64(&[1, 0, 0, 1]),
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn cyclic_rejects_tiny_n() {
        assert!(gen_cyclic(1).is_err());
        assert!(gen_cyclic(0).is_err());
    }

    #[test]
    fn pair_indices_are_lexicographic() {
        assert_eq!(pair_index(4, 1, 2), 0);
        assert_eq!(pair_index(4, 1, 4), 2);
        assert_eq!(pair_index(4, 2, 3), 3);
        assert_eq!(pair_index(4, 3, 4), 5);
        assert_eq!(pair_index(4, 4, 3), 5);
    }

    #[test]
    fn nbody3_shape() {
        let sys = gen_nbody(3).unwrap();
        assert_eq!(sys.dim(), 3);
        assert_eq!(sys.names(), &["x12", "x13", "x23"]);
        assert_eq!(sys.supports().len(), 3);
        // Pair (1,2) with e = 3, cleared by x12^6 x13^3 x23^3.
        let mut got: Vec<IntVector> = sys.supports()[0].points().to_vec();
        got.sort();
        let mut want: Vec<IntVector> = [
            [6, 0, 5],
            [6, 2, 3],
            [8, 0, 3],
            [6, 5, 0],
            [6, 3, 2],
            [8, 3, 0],
            [8, 3, 3],
            [5, 3, 3],
        ]
        .iter()
        .map(|r| IntVector::from_i64(r))
        .collect();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn cross_terms_cancel() {
        // Without the +/- x_ik^2 cancellation each support would be larger;
        // the n=3 body support has exactly 8 points, not 10.
        let sys = gen_nbody(3).unwrap();
        for s in sys.supports() {
            assert_eq!(s.points().len(), 8);
        }
    }

    #[test]
    fn nvortex3_shape() {
        let sys = gen_nvortex(3).unwrap();
        assert_eq!(sys.supports().len(), 3);
        // e = 2 turns every x^{2-e} factor into a constant, so the six
        // nbody monomials per pair shrink to a constant, x_ij^2, and four
        // cross terms.
        for s in sys.supports() {
            assert_eq!(s.points().len(), 6);
        }
    }

    #[test]
    fn generators_are_deterministic() {
        let a = format_system(&gen_nbody(4).unwrap());
        let b = format_system(&gen_nbody(4).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn minors_shape() {
        let sys = gen_minors();
        assert_eq!(sys.dim(), 25);
        assert_eq!(sys.supports().len(), 25);
        for s in sys.supports() {
            assert_eq!(s.points().len(), 24);
            for p in s.points() {
                let entries: Vec<i64> =
                    p.coords().iter().map(|c| i64::try_from(c).unwrap()).collect();
                assert_eq!(entries.iter().sum::<i64>(), 4);
                assert!(entries.iter().all(|e| *e == 0 || *e == 1));
            }
        }
    }

    #[test]
    fn parse_tuple_form() {
        let sys = parse_system("variables: 2\npoly: (1,0) (0,1)").unwrap();
        assert_eq!(sys.dim(), 2);
        assert_eq!(sys.supports().len(), 1);
        assert_eq!(sys.supports()[0].points().len(), 2);
    }

    #[test]
    fn parse_symbolic_form() {
        let sys = parse_system("variables: 3\npoly: x0*x1 + x2^3 - 1").unwrap();
        let mut got: Vec<IntVector> = sys.supports()[0].points().to_vec();
        got.sort();
        let mut want = vec![
            IntVector::from_i64(&[1, 1, 0]),
            IntVector::from_i64(&[0, 0, 3]),
            IntVector::from_i64(&[0, 0, 0]),
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn parse_collapses_duplicates() {
        let sys = parse_system("variables: 2\npoly: (1,0) (1,0) (0,1)").unwrap();
        assert_eq!(sys.supports()[0].points().len(), 2);
        let sym = parse_system("variables: x y\npoly: 2*x + 3*x + y").unwrap();
        assert_eq!(sym.supports()[0].points().len(), 2);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let arity = parse_system("variables: 2\npoly: (1,0,0)").unwrap_err();
        assert!(matches!(arity, Error::Parse { line: 2, .. }));
        let neg = parse_system("variables: 2\n\npoly: (1,-1)").unwrap_err();
        assert!(matches!(neg, Error::Parse { line: 3, .. }));
        let unknown = parse_system("variables: x y\npoly: z^2").unwrap_err();
        assert!(matches!(unknown, Error::Parse { line: 2, .. }));
        let noheader = parse_system("poly: (1,0)").unwrap_err();
        assert!(matches!(noheader, Error::Parse { line: 1, .. }));
        let negpow = parse_system("variables: x\npoly: x^-2").unwrap_err();
        assert!(matches!(negpow, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn round_trip_generated_systems() {
        for sys in [gen_cyclic(5).unwrap(), gen_nbody(3).unwrap(), gen_nvortex(4).unwrap()] {
            let text = format_system(&sys);
            let back = parse_system(&text).unwrap();
            assert_eq!(back.names(), sys.names());
            assert_eq!(back.supports(), sys.supports());
        }
    }
}
