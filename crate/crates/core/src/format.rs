//! The instance file format: read and write.
//!
//! ```text
//! # any comment
//! p ip01 <n> <m>
//! c <c1> ... <cn>
//! e <a1> ... <an> <rhs>
//! ```
//!
//! The header declares the shape. The objective line `c` is optional and
//! may appear anywhere after the header, but only once; exactly `m`
//! constraint lines `e` must follow, each carrying the row and its
//! right-hand side. Blank lines and `#` comments are ignored, trailing
//! carriage returns are tolerated, and numbers are integers, decimals, or
//! fractions. Rendering always emits the canonical layout — header,
//! objective, constraints — with canonical scalars, so parsing a rendered
//! instance reproduces it exactly.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::generate::{GenSpec, Generated, RNG_ALGORITHM};
use crate::instance::Instance;
use crate::scalar::{parse_scalar, render_scalar, Scalar};

/// Byte offset and text of every whitespace-separated token in `line`.
fn tokens_with_offsets(line: &str) -> Vec<(usize, &str)> {
    let bytes = line.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        out.push((start, &line[start..i]));
    }
    out
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses one scalar token, translating syntax errors to file positions.
fn scalar_at(line_no: usize, offset: usize, token: &str) -> Result<Scalar> {
    parse_scalar(token).map_err(|e| match e {
        Error::ScalarSyntax { offset: at, message, token } => parse_err(
            line_no,
            offset + at + 1,
            format!("{message} in scalar {token:?}"),
        ),
        other => other,
    })
}

fn parse_count(line_no: usize, offset: usize, token: &str, what: &str) -> Result<usize> {
    token
        .parse::<usize>()
        .map_err(|_| parse_err(line_no, offset + 1, format!("{what} must be a nonnegative integer, got {token:?}")))
}

/// Parses an instance from file text.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut shape: Option<(usize, usize)> = None;
    let mut objective: Option<Vec<Scalar>> = None;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut rhs: Vec<Scalar> = Vec::new();
    let mut line_count = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        line_count = line_no;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let tokens = tokens_with_offsets(line);
        let Some(&(tag_at, tag)) = tokens.first() else {
            continue;
        };
        if tag.starts_with('#') {
            continue;
        }
        let Some((n, m)) = shape else {
            if tag != "p" {
                return Err(parse_err(line_no, tag_at + 1, "expected header `p ip01 <n> <m>`"));
            }
            if tokens.len() != 4 {
                return Err(parse_err(
                    line_no,
                    tag_at + 1,
                    format!("header has {} of 4 tokens", tokens.len()),
                ));
            }
            let (fmt_at, fmt) = tokens[1];
            if fmt != "ip01" {
                return Err(parse_err(
                    line_no,
                    fmt_at + 1,
                    format!("unknown format {fmt:?}; this parser reads ip01"),
                ));
            }
            let n = parse_count(line_no, tokens[2].0, tokens[2].1, "n")?;
            let m = parse_count(line_no, tokens[3].0, tokens[3].1, "m")?;
            shape = Some((n, m));
            continue;
        };
        match tag {
            "c" => {
                if objective.is_some() {
                    return Err(parse_err(line_no, tag_at + 1, "duplicate objective line"));
                }
                if tokens.len() != n + 1 {
                    return Err(parse_err(
                        line_no,
                        tag_at + 1,
                        format!("objective line has {} of {} coefficients", tokens.len() - 1, n),
                    ));
                }
                let mut c = Vec::with_capacity(n);
                for &(at, token) in &tokens[1..] {
                    c.push(scalar_at(line_no, at, token)?);
                }
                objective = Some(c);
            }
            "e" => {
                if rows.len() == m {
                    return Err(parse_err(
                        line_no,
                        tag_at + 1,
                        format!("the header declares only {m} constraint lines"),
                    ));
                }
                if tokens.len() != n + 2 {
                    return Err(parse_err(
                        line_no,
                        tag_at + 1,
                        format!(
                            "constraint line has {} of {} entries (coefficients plus right-hand side)",
                            tokens.len() - 1,
                            n + 1
                        ),
                    ));
                }
                let mut row = Vec::with_capacity(n);
                for &(at, token) in &tokens[1..=n] {
                    row.push(scalar_at(line_no, at, token)?);
                }
                let (at, token) = tokens[n + 1];
                rhs.push(scalar_at(line_no, at, token)?);
                rows.push(row);
            }
            "p" => {
                return Err(parse_err(line_no, tag_at + 1, "duplicate header line"));
            }
            other => {
                return Err(parse_err(
                    line_no,
                    tag_at + 1,
                    format!("unexpected line tag {other:?}; expected c or e"),
                ));
            }
        }
    }

    let Some((n, m)) = shape else {
        return Err(parse_err(line_count.max(1), 1, "missing header `p ip01 <n> <m>`"));
    };
    if rows.len() != m {
        return Err(parse_err(
            line_count + 1,
            1,
            format!("found {} of {} constraint lines", rows.len(), m),
        ));
    }
    Instance::new(n, m, rows, rhs, objective)
}

/// Renders an instance in canonical layout.
pub fn render_instance(instance: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p ip01 {} {}", instance.n(), instance.m());
    if let Some(c) = instance.objective() {
        out.push('c');
        for v in c {
            let _ = write!(out, " {}", render_scalar(v));
        }
        out.push('\n');
    }
    for i in 0..instance.m() {
        out.push('e');
        for v in instance.row(i) {
            let _ = write!(out, " {}", render_scalar(v));
        }
        let _ = writeln!(out, " {}", render_scalar(&instance.rhs()[i]));
    }
    out
}

/// Renders a generated instance with its provenance in leading comments,
/// so the file alone suffices to reproduce or verify it.
pub fn render_generated(spec: &GenSpec, generated: &Generated) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "# generator family={} n={} m={} seed={} coeff_range={} density={} objective={} rng={}",
        spec.family,
        spec.n,
        spec.m,
        spec.seed,
        spec.coeff_range,
        spec.density,
        spec.with_objective,
        RNG_ALGORITHM
    );
    if spec.family == crate::generate::Family::SubsetSum {
        let _ = write!(out, " target={}", if spec.planted_target { "planted" } else { "uniform" });
    }
    out.push('\n');
    if let Some(witness) = &generated.witness {
        let _ = writeln!(out, "# planted_witness {witness}");
    }
    out.push_str(&render_instance(&generated.instance));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family};
    use proptest::prelude::*;

    #[test]
    fn parses_the_basic_layout() {
        let text = "p ip01 4 1\nc 5 1 3 2\ne 1 1 1 1 2\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!((inst.n(), inst.m()), (4, 1));
        assert_eq!(inst.objective().unwrap()[0], Scalar::from_int(5));
        assert_eq!(inst.rhs()[0], Scalar::from_int(2));
    }

    #[test]
    fn tolerates_comments_blanks_crlf_and_late_objectives() {
        let text = "# a knapsack\r\n\r\np ip01 2 1\r\ne 2/4 0.75 -3 \r\nc 1 -1\r\n# trailing\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.coeff(0, 0), &Scalar::ratio(1, 2));
        assert_eq!(inst.coeff(0, 1), &Scalar::ratio(3, 4));
        assert_eq!(inst.rhs()[0], Scalar::from_int(-3));
        assert_eq!(inst.objective().unwrap().len(), 2);
    }

    #[test]
    fn renders_canonically() {
        let inst = Instance::new(
            3,
            1,
            vec![vec![Scalar::ratio(2, 4), Scalar::from_int(-3), Scalar::ratio(7, 1)]],
            vec![Scalar::ratio(-1, 3)],
            None,
        )
        .unwrap();
        assert_eq!(render_instance(&inst), "p ip01 3 1\ne 1/2 -3 7 -1/3\n");
    }

    #[test]
    fn rendering_then_parsing_is_identity() {
        let inst = Instance::from_ints(
            3,
            &[&[1, -2, 3], &[0, 4, -5]],
            &[7, -8],
            Some(&[9, -10, 11]),
        )
        .unwrap();
        assert_eq!(parse_instance(&render_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn error_positions_are_one_based_lines_and_columns() {
        let cases: &[(&str, usize, usize, &str)] = &[
            ("e 1 2\np ip01 1 1\n", 1, 1, "expected header"),
            ("p lp 2 1\ne 1 1 2\n", 1, 3, "unknown format"),
            ("p ip01 -2 1\n", 1, 8, "nonnegative integer"),
            ("p ip01 2 1\nc 1\ne 1 1 2\n", 2, 1, "objective line has 1 of 2"),
            ("p ip01 2 1\nc 1 2\nc 3 4\ne 1 1 2\n", 3, 1, "duplicate objective"),
            ("p ip01 2 1\ne 1 1\n", 2, 1, "constraint line has 2 of 3"),
            ("p ip01 2 1\ne 1 1 2\ne 1 1 2\n", 3, 1, "declares only 1"),
            ("p ip01 2 1\nx 1 1 2\n", 2, 1, "unexpected line tag"),
            ("p ip01 2 1\np ip01 2 1\n", 2, 1, "duplicate header"),
            ("p ip01 2 1\ne 1 1/0 2\n", 2, 7, "zero denominator"),
            ("p ip01 2 1\ne 1 2x 2\n", 2, 6, "in scalar \"2x\""),
            ("p ip01 2 1\n", 2, 1, "found 0 of 1 constraint lines"),
            ("# nothing\n", 1, 1, "missing header"),
            ("", 1, 1, "missing header"),
        ];
        for &(text, line, column, needle) in cases {
            match parse_instance(text) {
                Err(Error::Parse { line: l, column: c, message }) => {
                    assert_eq!((l, c), (line, column), "position for {text:?}: {message}");
                    assert!(message.contains(needle), "{message:?} lacks {needle:?}");
                }
                other => panic!("expected a parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn generated_files_carry_their_provenance() {
        let mut spec = GenSpec::new(Family::Planted, 6, 2, 31);
        spec.with_objective = true;
        let generated = generate(&spec).unwrap();
        let text = render_generated(&spec, &generated);
        assert!(text.starts_with(
            "# generator family=planted n=6 m=2 seed=31 coeff_range=5 density=1 objective=true rng=chacha12-seed64\n"
        ));
        assert!(text.contains("# planted_witness "));
        assert_eq!(parse_instance(&text).unwrap(), generated.instance);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        /// Round-tripping holds for arbitrary rational data.
        #[test]
        fn round_trip_identity(
            nums in proptest::collection::vec((-50i64..=50, 1i64..=9), 4..=13),
            with_objective in proptest::bool::ANY,
        ) {
            // Shape 3 columns wide, filling rows of (coefficients, rhs).
            let scalars: Vec<Scalar> = nums.iter().map(|&(p, q)| Scalar::ratio(p, q)).collect();
            let n = 2usize;
            let c = with_objective.then(|| scalars[..n].to_vec());
            let usable = (scalars.len() - n) / (n + 1);
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for chunk in scalars[n..n + usable * (n + 1)].chunks(n + 1) {
                rows.push(chunk[..n].to_vec());
                rhs.push(chunk[n].clone());
            }
            let inst = Instance::new(n, rows.len(), rows, rhs, c).unwrap();
            prop_assert_eq!(parse_instance(&render_instance(&inst)).unwrap(), inst);
        }
    }
}
