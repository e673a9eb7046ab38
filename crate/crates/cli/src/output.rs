//! JSON or plain-text table output.

use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Table,
}

pub fn render(v: &Value, f: Format) -> String {
    match f {
        Format::Json => serde_json::to_string_pretty(v).expect("JSON value"),
        Format::Table => table(v),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn grid(header: &[String], rows: &[Vec<String>]) -> String {
    let n = header.len();
    let mut w: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate().take(n) {
            w[i] = w[i].max(c.chars().count());
        }
    }
    let line = |r: &[String]| {
        let cells: Vec<String> = r.iter().enumerate().map(|(i, c)| format!("{c:<width$}", width = w[i])).collect();
        cells.join("  ").trim_end().to_string()
    };
    let mut out = vec![line(header)];
    out.push(w.iter().map(|&k| "-".repeat(k)).collect::<Vec<_>>().join("  "));
    out.extend(rows.iter().map(|r| line(r)));
    out.join("\n")
}

fn table(v: &Value) -> String {
    match v {
        Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object) => {
            let mut keys: Vec<String> = Vec::new();
            for it in items {
                for k in it.as_object().expect("object").keys() {
                    if !keys.contains(k) {
                        keys.push(k.clone());
                    }
                }
            }
            let rows: Vec<Vec<String>> =
                items.iter().map(|it| keys.iter().map(|k| it.get(k).map_or_else(String::new, cell)).collect()).collect();
            grid(&keys, &rows)
        }
        Value::Array(items) => {
            let rows: Vec<Vec<String>> = items.iter().enumerate().map(|(i, x)| vec![i.to_string(), cell(x)]).collect();
            grid(&["index".into(), "value".into()], &rows)
        }
        Value::Object(m) => {
            let rows: Vec<Vec<String>> = m.iter().map(|(k, x)| vec![k.clone(), cell(x)]).collect();
            grid(&["field".into(), "value".into()], &rows)
        }
        other => cell(other),
    }
}
