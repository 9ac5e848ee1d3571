//! Class-count tables keyed by discriminant, and comparison against a
//! reference table.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use perfect_forms::qfield::is_squarefree;

use crate::CliError;

/// One computed row: `N_D`, or the error that prevented it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Count {
    Classes(usize),
    Error(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub discriminant: i64,
    pub count: Count,
}

/// Square-free `d` in `[lo, hi]` with `d >= 2`.
pub fn squarefree_range(lo: i64, hi: i64) -> Vec<i64> {
    (lo.max(2)..=hi).filter(|&d| is_squarefree(d)).collect()
}

pub fn discriminant_of(d: i64) -> i64 {
    if d % 4 == 1 {
        d
    } else {
        4 * d
    }
}

/// Inverse of [`discriminant_of`] on fundamental discriminants.
pub fn d_of_discriminant(disc: i64) -> Option<i64> {
    let d = if disc % 4 == 1 {
        disc
    } else if disc % 4 == 0 && matches!((disc / 4) % 4, 2 | 3) {
        disc / 4
    } else {
        return None;
    };
    (d >= 2 && is_squarefree(d)).then_some(d)
}

pub fn render_csv(rows: &[Row]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["D", "N_D"])?;
    for r in rows {
        let count = match &r.count {
            Count::Classes(n) => n.to_string(),
            Count::Error(_) => "ERROR".to_string(),
        };
        w.write_record([r.discriminant.to_string(), count])?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("ascii"))
}

/// Whitespace-separated `(D, N_D)` pairs for plotting; error rows are left out.
pub fn render_plot(rows: &[Row]) -> String {
    let mut s = String::from("# D N_D\n");
    for r in rows {
        if let Count::Classes(n) = r.count {
            writeln!(s, "{} {}", r.discriminant, n).expect("write to string");
        }
    }
    s
}

/// Reads a table with columns `D` and `N_D` (other columns ignored).
/// Rows marked `ERROR` come back as [`Count::Error`].
pub fn parse_table(text: &str) -> Result<Vec<Row>, CliError> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = r.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Usage(format!("table has no {name} column")))
    };
    let (di, ni) = (col("D")?, col("N_D")?);
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let bad = || CliError::Usage(format!("malformed table row {}: {:?}", line + 2, rec));
        let discriminant = rec.get(di).ok_or_else(bad)?.parse::<i64>().map_err(|_| bad())?;
        let field = rec.get(ni).ok_or_else(bad)?;
        let count = if field == "ERROR" {
            Count::Error("reported as ERROR".into())
        } else {
            Count::Classes(field.parse::<usize>().map_err(|_| bad())?)
        };
        rows.push(Row { discriminant, count });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub lines: Vec<String>,
    pub matched: usize,
    pub total: usize,
}

impl Comparison {
    pub fn all_match(&self) -> bool {
        self.matched == self.total
    }
}

pub fn compare(computed: &[Row], reference: &[Row]) -> Comparison {
    let expected: BTreeMap<i64, &Count> = reference.iter().map(|r| (r.discriminant, &r.count)).collect();
    let mut lines = Vec::new();
    let mut matched = 0;
    for row in computed {
        let got = match &row.count {
            Count::Classes(n) => n.to_string(),
            Count::Error(e) => format!("ERROR ({e})"),
        };
        let line = match expected.get(&row.discriminant) {
            Some(Count::Classes(want)) if row.count == Count::Classes(*want) => {
                matched += 1;
                format!("D={} N_D={} reference={} match", row.discriminant, got, want)
            }
            Some(Count::Classes(want)) => {
                format!("D={} N_D={} reference={} MISMATCH", row.discriminant, got, want)
            }
            _ => format!("D={} N_D={} reference=missing MISMATCH", row.discriminant, got),
        };
        lines.push(line);
    }
    Comparison {
        lines,
        matched,
        total: computed.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(d: i64, n: usize) -> Row {
        Row {
            discriminant: d,
            count: Count::Classes(n),
        }
    }

    #[test]
    fn csv_roundtrip() {
        let rows = vec![
            row(5, 2),
            row(8, 2),
            Row {
                discriminant: 12,
                count: Count::Error("x".into()),
            },
        ];
        let text = render_csv(&rows).unwrap();
        assert_eq!(text, "D,N_D\n5,2\n8,2\n12,ERROR\n");
        let back = parse_table(&text).unwrap();
        assert_eq!(back[..2], rows[..2]);
        assert!(matches!(back[2].count, Count::Error(_)));
        assert_eq!(render_csv(&[]).unwrap(), "D,N_D\n");
    }

    #[test]
    fn discriminants() {
        assert_eq!(squarefree_range(1, 13), vec![2, 3, 5, 6, 7, 10, 11, 13]);
        for d in squarefree_range(2, 200) {
            assert_eq!(d_of_discriminant(discriminant_of(d)), Some(d));
        }
        assert_eq!(d_of_discriminant(16), None);
        assert_eq!(d_of_discriminant(9), None);
    }

    #[test]
    fn comparison() {
        let c = compare(&[row(5, 2), row(8, 2)], &[row(5, 2), row(8, 2)]);
        assert!(c.all_match());
        assert_eq!((c.matched, c.total), (2, 2));
        let c = compare(&[row(5, 3)], &[row(5, 2)]);
        assert!(!c.all_match());
        assert!(c.lines[0].ends_with("MISMATCH"));
    }

    #[test]
    fn malformed_reference() {
        assert!(parse_table("D,N_D\n5,two\n").is_err());
        assert!(parse_table("X,Y\n1,2\n").is_err());
        let shipped = parse_table(include_str!("../data/reference_counts.csv")).unwrap();
        assert_eq!(shipped.len(), 40);
    }
}
