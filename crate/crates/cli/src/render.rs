use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use sev_core::suites::SuiteReport;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    #[value(name = "md", alias = "markdown")]
    Markdown,
}

pub fn json<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(_) | Value::Number(_) => v.to_string(),
        _ => v.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn md_field(s: &str) -> String {
    s.replace('|', "\\|")
}

fn table(header: &[String], rows: &[Vec<String>], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            let line = |r: &[String]| r.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",");
            out.push_str(&line(header));
            out.push('\n');
            for r in rows {
                out.push_str(&line(r));
                out.push('\n');
            }
        }
        _ => {
            let line = |r: &[String]| {
                format!(
                    "| {} |\n",
                    r.iter()
                        .map(|f| md_field(f))
                        .collect::<Vec<_>>()
                        .join(" | ")
                )
            };
            out.push_str(&line(header));
            out.push_str(&format!("|{}\n", "---|".repeat(header.len())));
            for r in rows {
                out.push_str(&line(r));
            }
        }
    }
    out
}

fn object_rows(items: &[Value]) -> Option<(Vec<String>, Vec<Vec<String>>)> {
    let mut header: Vec<String> = Vec::new();
    for it in items {
        for k in it.as_object()?.keys() {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let rows = items
        .iter()
        .map(|it| {
            header
                .iter()
                .map(|k| it.get(k).map_or(String::new(), cell))
                .collect()
        })
        .collect();
    Some((header, rows))
}

/// A JSON value as `field,value` rows followed by one table per array of
/// objects.
pub fn value(v: &Value, format: Format) -> String {
    if format == Format::Json {
        return json(v);
    }
    let Value::Object(map) = v else {
        return cell(v) + "\n";
    };
    let mut scalars = Vec::new();
    let mut sections = Vec::new();
    for (k, x) in map {
        match x {
            Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object) => {
                sections.push((k.clone(), items.clone()));
            }
            _ => scalars.push(vec![k.clone(), cell(x)]),
        }
    }
    let mut out = table(&["field".into(), "value".into()], &scalars, format);
    for (name, items) in sections {
        let (header, rows) = object_rows(&items).expect("objects");
        out.push('\n');
        if format == Format::Markdown {
            out.push_str(&format!("**{name}**\n\n"));
        } else {
            out.push_str(&format!("# {name}\n"));
        }
        out.push_str(&table(&header, &rows, format));
    }
    out
}

/// One line per check in text formats, ending with the overall verdict.
pub fn suite(r: &SuiteReport, format: Format) -> String {
    if format == Format::Json {
        let mut v = serde_json::to_value(r).expect("serializable");
        if let Value::Object(m) = &mut v {
            m.insert("passed".into(), r.passed().into());
        }
        return json(&v);
    }
    let rows: Vec<Vec<String>> = r
        .checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                if c.passed { "PASS" } else { "FAIL" }.into(),
                c.detail.clone(),
            ]
        })
        .collect();
    let mut out = table(
        &["check".into(), "result".into(), "detail".into()],
        &rows,
        format,
    );
    let failed = r.checks.iter().filter(|c| !c.passed).count();
    let verdict = format!("{}: {} checks, {failed} failed", r.suite, r.checks.len());
    match format {
        Format::Markdown => out.push_str(&format!("\n{verdict}\n")),
        _ => out.push_str(&format!("# {verdict}\n")),
    }
    out
}
