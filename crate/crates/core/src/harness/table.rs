use std::fmt::Write;

/// Left-aligned columns separated by two spaces.
pub(crate) fn render(headers: &[&str], rows: &[Vec<String>]) -> String {
    let cols = headers.len();
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (c, cell) in row.iter().enumerate().take(cols) {
            widths[c] = widths[c].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, cells: &mut dyn Iterator<Item = &str>| {
        let mut text = String::new();
        for (c, cell) in cells.enumerate() {
            if c > 0 {
                text.push_str("  ");
            }
            let _ = write!(text, "{cell:<w$}", w = widths[c]);
        }
        out.push_str(text.trim_end());
        out.push('\n');
    };
    line(&mut out, &mut headers.iter().copied());
    line(
        &mut out,
        &mut widths
            .iter()
            .map(|w| "-".repeat(*w))
            .collect::<Vec<_>>()
            .iter()
            .map(String::as_str),
    );
    for row in rows {
        line(&mut out, &mut row.iter().map(String::as_str));
    }
    out
}

pub(crate) fn mark(pass: bool) -> String {
    if pass { "pass" } else { "FAIL" }.into()
}
