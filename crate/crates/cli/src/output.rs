//! CSV with a `#` metadata line. Values use 17 significant digits, so they
//! round-trip exactly.

use std::collections::BTreeMap;
use std::io::{self, Write};

use crate::model::{BoundSpec, ModelKind, Record};

pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

/// `# gramqfi <command> model=… sweep=… grid=… <fixed inputs> copies=… weight=…`
pub fn metadata(
    command: &str,
    kind: ModelKind,
    fixed: &BTreeMap<String, f64>,
    bound: &BoundSpec,
    sweep: Option<(&str, &str)>,
) -> String {
    let mut fields = vec![
        format!("gramqfi {command}"),
        format!("model={}", kind.name()),
    ];
    if let Some((variable, grid)) = sweep {
        fields.push(format!("sweep={variable}"));
        fields.push(format!("grid={grid}"));
    }
    for (name, _) in kind.inputs() {
        if let Some(v) = fixed.get(*name) {
            fields.push(format!("{name}={}", format_value(*v)));
        }
    }
    fields.push(format!("copies={}", bound.copies));
    let weight = match &bound.weight {
        Some(w) => w
            .iter()
            .map(|&x| format_value(x))
            .collect::<Vec<_>>()
            .join(";"),
        None => "identity".into(),
    };
    fields.push(format!("weight={weight}"));
    format!("# {}", fields.join(" "))
}

pub fn write_csv<W: Write>(
    out: &mut W,
    meta: &str,
    columns: &[String],
    records: &[Record],
) -> io::Result<()> {
    writeln!(out, "{meta}")?;
    writeln!(out, "{}", columns.join(","))?;
    for record in records {
        let row: Vec<String> = columns
            .iter()
            .map(|c| format_value(record.column(c).unwrap_or(f64::NAN)))
            .collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
