//! CSV emission: header row first, one record per grid time, '.' decimal
//! separator, no locale. Every float is printed with 17 significant
//! digits so the written value round-trips to the exact double, and
//! reruns of the same scenario are byte-identical. Masked cells (points
//! excluded by a comparison's tail mask) are left empty.

use std::io::Write;

/// A float at full round-trip precision.
pub fn cell(v: f64) -> String {
    format!("{v:.16e}")
}

/// A masked value: empty when the mask dropped the point.
pub fn masked_cell(v: Option<f64>) -> String {
    v.map(cell).unwrap_or_default()
}

/// Write `header` and `rows` as CSV. Cells are emitted verbatim; callers
/// format numbers through [`cell`]/[`masked_cell`] so every emitter
/// shares one notion of precision.
pub fn write_records<W: Write>(
    out: W,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> std::io::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(&row)?;
    }
    writer.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells_round_trip_doubles_exactly() {
        for &v in &[4.697523333114172e-6, -8.770720577883994e-4, 0.0, 1.0 / 3.0] {
            assert_eq!(cell(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(masked_cell(None), "");
        assert_eq!(masked_cell(Some(0.5)).parse::<f64>().unwrap(), 0.5);
    }

    #[test]
    fn records_are_plain_comma_separated_lines() {
        let mut buf = Vec::new();
        write_records(
            &mut buf,
            &["t", "u"],
            vec![vec![cell(200.0), cell(1.5e-6)], vec![cell(240.0), String::new()]],
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,u"));
        assert_eq!(lines.next(), Some("2.0000000000000000e2,1.5000000000000000e-6"));
        assert_eq!(lines.next(), Some("2.4000000000000000e2,"));
        assert_eq!(lines.next(), None);
    }
}
