//! Plain-text tables for terminal output.

use es_core::report::SumReport;

fn fmt_real(v: f64) -> String {
    if v == 0.0 || (1e-4..1e12).contains(&v.abs()) {
        format!("{v:.6}")
    } else {
        format!("{v:.6e}")
    }
}

/// Aligned columns: name, keys, value, envelope, ratio.
pub fn table(r: &SumReport) -> String {
    let params: Vec<String> = r.metadata.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let mut out = format!("{} ({})\n", r.label, params.join(", "));
    let mut rows = vec![["name".to_string(), "keys".into(), "value".into(), "envelope".into(), "ratio".into()]];
    for row in &r.rows {
        let keys: Vec<String> = row.keys.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let value = match row.value {
            es_core::report::Value::Int(v) => v.to_string(),
            es_core::report::Value::Real(v) => fmt_real(v),
        };
        rows.push([
            row.name.clone(),
            keys.join(" "),
            value,
            row.envelope.map(fmt_real).unwrap_or_default(),
            row.ratio.map(fmt_real).unwrap_or_default(),
        ]);
    }
    let widths: Vec<usize> = (0..5).map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
    for r in rows {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use es_core::report::SumRow;

    #[test]
    fn table_lists_every_row() {
        let mut r = SumReport::new("demo", [("x", "10".to_string())]);
        r.push(SumRow::int("total", 7).key("case", "I").with_envelope(14.0));
        r.push(SumRow::real("tiny", 1.5e-9));
        let t = table(&r);
        assert!(t.starts_with("demo (x=10)\n"));
        assert!(t.contains("total  case=I  7"));
        assert!(t.contains("0.500000"));
        assert!(t.contains("1.500000e-9"));
        assert_eq!(t.lines().count(), 4);
    }
}
