//! The tables of small realizers, regenerated from their
//! constructions and compared with checked-in golden files.

use crate::cert::{base, complement, empty, join, k1, union, ConstructionExpr};
use crate::descriptor::recognize;
use crate::error::CertificateError;
use crate::graph::GraphFamily;
use crate::spectra::integer_spectrum;

pub const GOLDEN_TABLE1: &str = include_str!("../golden/table1.txt");
pub const GOLDEN_TABLE2: &str = include_str!("../golden/table2.txt");

const HEADER: &str = "# n\tdescriptor\tcertificate\tspectrum";

fn f(family: GraphFamily) -> ConstructionExpr {
    base(family)
}

fn k2() -> ConstructionExpr {
    f(GraphFamily::Complete(2))
}

fn p3() -> ConstructionExpr {
    f(GraphFamily::Path(3))
}

fn star() -> ConstructionExpr {
    f(GraphFamily::CompleteBipartite(3, 1))
}

/// Realizers of `S{i,j}n^1`, `n = 4..8`, in table order.
pub fn table1_constructions() -> Vec<ConstructionExpr> {
    vec![
        star(),
        join(k1(), complement(join(k2(), empty(2)))),
        join(k1(), union(empty(2), p3())),
        join(k1(), union(p3(), complement(p3()))),
        join(k1(), union(empty(2), join(k1(), complement(p3())))),
        join(union(join(empty(2), complement(p3())), empty(2)), k1()),
        join(union(f(GraphFamily::AntiRegular(5)), empty(2)), k1()),
        join(union(complement(p3()), f(GraphFamily::AntiRegular(4))), k1()),
    ]
}

/// Realizers of `S{i,j}n^2`, `n = 4..8`, in table order.
pub fn table2_constructions() -> Vec<ConstructionExpr> {
    vec![
        f(GraphFamily::Cycle(4)),
        f(GraphFamily::CompleteBipartite(3, 2)),
        join(union(star(), k1()), k1()),
        join(union(star(), k2()), k1()),
        join(union(join(union(k2(), empty(2)), k1()), k2()), k1()),
        join(k1(), union(k1(), join(k1(), union(empty(2), p3())))),
    ]
}

/// One line per construction: order, recognized descriptor, certificate and
/// exact spectrum, under a header line.
pub fn render_table(rows: &[ConstructionExpr]) -> Result<String, CertificateError> {
    let mut out = format!("{HEADER}\n");
    for expr in rows {
        let g = expr.evaluate()?;
        let spectrum = integer_spectrum(&g).map_err(|_| CertificateError::NotIntegral)?;
        let d = recognize(&spectrum).map(|d| d.to_string()).unwrap_or_else(|| "-".into());
        out.push_str(&format!("{}\t{d}\t{expr}\t{spectrum}\n", g.order()));
    }
    Ok(out)
}

/// Lines of `golden` and `rendered` that differ, as `-`/`+` pairs.
pub fn diff_lines(golden: &str, rendered: &str) -> Vec<String> {
    let g: Vec<&str> = golden.lines().collect();
    let r: Vec<&str> = rendered.lines().collect();
    let mut out = Vec::new();
    for k in 0..g.len().max(r.len()) {
        let (a, b) = (g.get(k), r.get(k));
        if a != b {
            if let Some(a) = a {
                out.push(format!("-{}: {a}", k + 1));
            }
            if let Some(b) = b {
                out.push(format!("+{}: {b}", k + 1));
            }
        }
    }
    out
}

pub struct TableCheck {
    pub name: &'static str,
    pub rendered: String,
    pub diff: Vec<String>,
}

/// Renders both tables and diffs them against the golden files.
pub fn check_tables() -> Result<Vec<TableCheck>, CertificateError> {
    let mut out = Vec::new();
    for (name, rows, golden) in [
        ("table1", table1_constructions(), GOLDEN_TABLE1),
        ("table2", table2_constructions(), GOLDEN_TABLE2),
    ] {
        let rendered = render_table(&rows)?;
        let diff = diff_lines(golden, &rendered);
        out.push(TableCheck { name, rendered, diff });
    }
    Ok(out)
}
