use serde::Serialize;

use super::ScanRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Markdown,
    Csv,
}

/// One parametrized row of the two-factor table together with the scan
/// records it accounts for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyRow {
    pub space: &'static str,
    pub multidegree: &'static str,
    pub variety: &'static str,
    pub h: &'static str,
    pub members: Vec<ScanRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyTable {
    pub rows: Vec<FamilyRow>,
    /// Records that fit no family, or fit its shape with a different range.
    pub unmatched: Vec<ScanRecord>,
}

/// `(n, d, e)` to the predicted `(h_min, h_max)`, if the record has the
/// family's shape.
type Predict = fn(&[u32], &[u32], &[u32]) -> Option<(u32, u32)>;

struct Family {
    space: &'static str,
    multidegree: &'static str,
    variety: &'static str,
    h: &'static str,
    predict: Predict,
}

fn p1p1_first(n: &[u32], d: &[u32], e: &[u32]) -> Option<(u32, u32)> {
    (n == [1, 1] && e[0] == 1 && e[1] >= 1 && d == [2, 2 * e[1]])
        .then(|| (2 * e[1] + 1, 2 * e[1] + 1))
}

fn p1p1_second(n: &[u32], d: &[u32], e: &[u32]) -> Option<(u32, u32)> {
    (n == [1, 1] && e[1] == 1 && e[0] >= 1 && d == [2 * e[0], 2])
        .then(|| (2 * e[0] + 1, 2 * e[0] + 1))
}

fn p1_pn(n: &[u32], d: &[u32], e: &[u32]) -> Option<(u32, u32)> {
    if !(n[0] == 1 && n[1] >= 2 && e[1] == 1 && e[0] >= 1 && d == [2 * e[0], 2]) {
        return None;
    }
    let (e1, n2) = (e[0] as u64, n[1] as u64);
    // h > (2e1+1)(n2+1)/2 − 1/(n2+2)
    let num = (2 * e1 + 1) * (n2 + 1) * (n2 + 2) - 2;
    let lo = num / (2 * (n2 + 2)) + 1;
    Some((lo as u32, (e1 * n2 + e1 + n2) as u32))
}

fn p2_pn(n: &[u32], d: &[u32], e: &[u32]) -> Option<(u32, u32)> {
    if !(n[0] == 2 && n[1] >= 2 && e == [1, 1] && d == [2, 2]) {
        return None;
    }
    let n2 = n[1] as u64;
    let lo = (3 * n2 * n2 + 9 * n2 + 5) / (n2 + 3) + 1;
    Some((lo as u32, (3 * n2 + 2) as u32))
}

fn p3p3(n: &[u32], d: &[u32], e: &[u32]) -> Option<(u32, u32)> {
    (n == [3, 3] && e == [1, 1] && d == [2, 2]).then_some((15, 15))
}

fn p3p4(n: &[u32], d: &[u32], e: &[u32]) -> Option<(u32, u32)> {
    (n == [3, 4] && e == [1, 1] && d == [2, 2]).then_some((19, 19))
}

const FAMILIES: [Family; 6] = [
    Family {
        space: "P1xP1",
        multidegree: "(2,2e2)",
        variety: "(1,e2)",
        h: "2e2+1",
        predict: p1p1_first,
    },
    Family {
        space: "P1xP1",
        multidegree: "(2e1,2)",
        variety: "(e1,1)",
        h: "2e1+1",
        predict: p1p1_second,
    },
    Family {
        space: "P1xP{n2}",
        multidegree: "(2e1,2)",
        variety: "(e1,1)",
        h: "(2e1+1)(n2+1)/2 - 1/(n2+2) < h <= e1n2+e1+n2",
        predict: p1_pn,
    },
    Family {
        space: "P2xP{n2}",
        multidegree: "(2,2)",
        variety: "(1,1)",
        h: "(3n2^2+9n2+5)/(n2+3) < h <= 3n2+2",
        predict: p2_pn,
    },
    Family {
        space: "P3xP3",
        multidegree: "(2,2)",
        variety: "(1,1)",
        h: "15",
        predict: p3p3,
    },
    Family {
        space: "P3xP4",
        multidegree: "(2,2)",
        variety: "(1,1)",
        h: "19",
        predict: p3p4,
    },
];

fn parse_tuple(s: &str) -> Vec<u32> {
    s.trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .filter_map(|x| x.parse().ok())
        .collect()
}

/// Groups two-factor divisor records into the parametrized families. A
/// record joins every family whose shape and predicted `h`-range it
/// matches; rows without members are dropped.
pub fn product_families(records: &[ScanRecord]) -> FamilyTable {
    let mut rows: Vec<FamilyRow> = FAMILIES
        .iter()
        .map(|f| FamilyRow {
            space: f.space,
            multidegree: f.multidegree,
            variety: f.variety,
            h: f.h,
            members: Vec::new(),
        })
        .collect();
    let mut unmatched = Vec::new();
    for r in records.iter().filter(|r| r.accepted) {
        let (n, d, e) = (r.space.factors(), &r.multidegree, parse_tuple(&r.variety));
        let mut hit = false;
        if n.len() == 2 && e.len() == 2 {
            for (f, row) in FAMILIES.iter().zip(rows.iter_mut()) {
                if (f.predict)(n, d, &e) == Some((r.h_min, r.h_max)) {
                    row.members.push(r.clone());
                    hit = true;
                }
            }
        }
        if !hit {
            unmatched.push(r.clone());
        }
    }
    rows.retain(|row| !row.members.is_empty());
    FamilyTable { rows, unmatched }
}

/// Rows where the printed floored lower bound with `≤` admits one value of
/// `h` that the strict inequality excludes.
pub fn floor_flags(table: &FamilyTable) -> Vec<String> {
    let mut out = Vec::new();
    for row in &table.rows {
        for r in &row.members {
            let (n, e) = (r.space.factors(), parse_tuple(&r.variety));
            let printed = match row.space {
                "P1xP{n2}" => {
                    let (e1, n2) = (e[0] as u64, n[1] as u64);
                    (2 * e1 + 1) * (n2 + 1) / 2
                }
                "P2xP{n2}" => {
                    let n2 = n[1] as u64;
                    (3 * n2 * n2 + 9 * n2 + 5) / (n2 + 3)
                }
                _ => continue,
            };
            if printed < r.h_min as u64 {
                out.push(format!(
                    "{} {} {}: floored bound admits h = {printed}, strict bound starts at {}",
                    r.space,
                    tuple_str(&r.multidegree),
                    r.variety,
                    r.h_min
                ));
            }
        }
    }
    out
}

fn tuple_str(v: &[u32]) -> String {
    let parts: Vec<String> = v.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render(rows: &[[String; 4]], format: TableFormat) -> String {
    let header = ["space", "multidegree", "variety", "h"];
    let mut out = String::new();
    match format {
        TableFormat::Markdown => {
            out.push_str(&format!("| {} |\n", header.join(" | ")));
            out.push_str("|---|---|---|---|\n");
            for r in rows {
                out.push_str(&format!("| {} |\n", r.join(" | ")));
            }
        }
        TableFormat::Csv => {
            out.push_str(&header.join(","));
            out.push('\n');
            for r in rows {
                let fields: Vec<String> = r.iter().map(|f| csv_field(f)).collect();
                out.push_str(&fields.join(","));
                out.push('\n');
            }
        }
    }
    out
}

fn record_row(r: &ScanRecord) -> [String; 4] {
    [
        r.space.to_string(),
        tuple_str(&r.multidegree),
        r.variety.clone(),
        r.h_label(),
    ]
}

/// Accepted records, one per line.
pub fn render_records(records: &[ScanRecord], format: TableFormat) -> String {
    let rows: Vec<[String; 4]> = records
        .iter()
        .filter(|r| r.accepted)
        .map(record_row)
        .collect();
    render(&rows, format)
}

impl FamilyTable {
    /// The family rows followed by any unmatched records.
    pub fn render(&self, format: TableFormat) -> String {
        let mut rows: Vec<[String; 4]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.space.to_string(),
                    r.multidegree.to_string(),
                    r.variety.to_string(),
                    r.h.to_string(),
                ]
            })
            .collect();
        rows.extend(self.unmatched.iter().map(record_row));
        render(&rows, format)
    }
}

#[cfg(test)]
mod tests {
    use super::super::scan_product_divisors;
    use super::*;

    #[test]
    fn two_factor_table() {
        let recs = scan_product_divisors(2, 6, 4, 9).unwrap();
        let table = product_families(&recs);
        assert!(table.unmatched.is_empty(), "{:#?}", table.unmatched);
        assert_eq!(table.rows.len(), 6);
        let csv = table.render(TableFormat::Csv);
        assert!(
            csv.starts_with("space,multidegree,variety,h\nP1xP1,\"(2,2e2)\",\"(1,e2)\",2e2+1\n")
        );
        let flags = floor_flags(&table);
        assert!(flags.iter().any(|f| f.starts_with("P1xP2 (4,2) (2,1)")));
    }

    #[test]
    fn unmatched_records_are_rendered() {
        let recs = scan_product_divisors(2, 2, 2, 4).unwrap();
        let mut fake = recs[0].clone();
        fake.h_max += 1;
        let table = product_families(&[fake]);
        assert_eq!(table.unmatched.len(), 1);
        assert!(table.render(TableFormat::Markdown).lines().count() == 3);
    }
}
