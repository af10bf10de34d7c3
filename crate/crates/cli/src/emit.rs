//! Report assembly: a small insertion-ordered JSON tree and the float
//! format shared by every emitter.
//!
//! Reports must be byte-identical across runs, so objects keep their
//! fields in insertion order and every float prints with exactly twelve
//! significant digits. An off-the-shelf JSON serializer would print
//! floats in shortest-roundtrip form, letting the digit count wander
//! with the value, which is why the tree is written by hand here.

use std::fmt::Write as _;

/// Twelve significant digits, positional while the decimal exponent lies
/// in [-4, 12), scientific otherwise. Negative zero collapses to zero so
/// equal values never print differently.
pub fn fmt_sig(x: f64) -> String {
    assert!(x.is_finite(), "reports only carry finite values, got {x}");
    let x = if x == 0.0 { 0.0 } else { x };
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponential format");
    let k: i32 = exp.parse().expect("decimal exponent");
    if !(-4..12).contains(&k) {
        return sci;
    }
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    debug_assert_eq!(digits.len(), 12);
    let mut out = String::from(sign);
    if k < 0 {
        out.push_str("0.");
        for _ in 0..(-k - 1) {
            out.push('0');
        }
        out.push_str(&digits);
    } else {
        let split = (k + 1) as usize;
        out.push_str(&digits[..split]);
        if split < digits.len() {
            out.push('.');
            out.push_str(&digits[split..]);
        }
    }
    out
}

/// A JSON value with insertion-ordered object fields. Keys are static
/// strings on purpose: every field name is part of the output contract.
pub enum Json {
    Null,
    Bool(bool),
    Int(i128),
    Float(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(&'static str, Json)>),
}

impl Json {
    pub fn float_or_null(x: Option<f64>) -> Json {
        x.map_or(Json::Null, Json::Float)
    }

    pub fn floats(xs: &[f64]) -> Json {
        Json::Arr(xs.iter().map(|&x| Json::Float(x)).collect())
    }

    pub fn strings<I: IntoIterator<Item = T>, T: Into<String>>(items: I) -> Json {
        Json::Arr(items.into_iter().map(|s| Json::Str(s.into())).collect())
    }

    /// Renders the tree with two-space indentation and a trailing newline.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn is_scalar(&self) -> bool {
        !matches!(self, Json::Arr(_) | Json::Obj(_))
    }

    fn write(&self, out: &mut String, depth: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => {
                let _ = write!(out, "{i}");
            }
            Json::Float(x) => out.push_str(&fmt_sig(*x)),
            Json::Str(s) => escape_into(s, out),
            Json::Arr(items) if items.is_empty() => out.push_str("[]"),
            // Arrays of scalars (length vectors, matrix rows) stay on one
            // line; anything nested gets one element per line.
            Json::Arr(items) if items.iter().all(Json::is_scalar) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    item.write(out, depth);
                }
                out.push(']');
            }
            Json::Arr(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    indent(out, depth + 1);
                    item.write(out, depth + 1);
                }
                out.push('\n');
                indent(out, depth);
                out.push(']');
            }
            Json::Obj(fields) if fields.is_empty() => out.push_str("{}"),
            Json::Obj(fields) => {
                out.push('{');
                for (i, (key, value)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    indent(out, depth + 1);
                    escape_into(key, out);
                    out.push_str(": ");
                    value.write(out, depth + 1);
                }
                out.push('\n');
                indent(out, depth);
                out.push('}');
            }
        }
    }
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

/// Quotes and escapes a string, keeping the output pure ASCII.
fn escape_into(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 || !c.is_ascii() => {
                let mut units = [0u16; 2];
                for unit in c.encode_utf16(&mut units) {
                    let _ = write!(out, "\\u{unit:04x}");
                }
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

/// Comma-separated rows under a fixed header. Fields must already be
/// plain ASCII tokens; there is no quoting layer.
pub struct Csv {
    out: String,
    width: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Csv {
        let mut csv = Csv {
            out: String::new(),
            width: header.len(),
        };
        csv.push_fields(header.iter().copied());
        csv
    }

    pub fn row<'a, I: IntoIterator<Item = &'a str>>(&mut self, fields: I) {
        self.push_fields(fields);
    }

    fn push_fields<'a, I: IntoIterator<Item = &'a str>>(&mut self, fields: I) {
        let mut count = 0;
        for (i, field) in fields.into_iter().enumerate() {
            debug_assert!(
                field.is_ascii() && !field.contains(&[',', '"', '\n', '\r'][..]),
                "CSV field {field:?} needs quoting, which this writer does not do"
            );
            if i > 0 {
                self.out.push(',');
            }
            self.out.push_str(field);
            count += 1;
        }
        debug_assert_eq!(count, self.width, "row width differs from the header");
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits_positional() {
        assert_eq!(fmt_sig(1.5), "1.50000000000");
        assert_eq!(fmt_sig(1.618033988749895), "1.61803398875");
        assert_eq!(fmt_sig(-0.38196601125010515), "-0.381966011250");
        assert_eq!(fmt_sig(684.0), "684.000000000");
        assert_eq!(fmt_sig(0.001), "0.00100000000000");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
    }

    #[test]
    fn zero_has_one_spelling() {
        assert_eq!(fmt_sig(0.0), "0.00000000000");
        assert_eq!(fmt_sig(-0.0), "0.00000000000");
    }

    #[test]
    fn extreme_exponents_stay_scientific() {
        assert_eq!(fmt_sig(1e-9), "1.00000000000e-9");
        assert_eq!(fmt_sig(123456789012345.0), "1.23456789012e14");
        // Exponent 11 is the last positional case: twelve digits, no dot.
        assert_eq!(fmt_sig(123456789012.0), "123456789012");
    }

    #[test]
    fn rendering_is_stable_and_ascii() {
        let tree = Json::Obj(vec![
            ("name", Json::Str("a\u{2192}b".into())),
            ("values", Json::floats(&[1.0, 0.5])),
            (
                "nested",
                Json::Arr(vec![Json::Obj(vec![("n", Json::Int(3))])]),
            ),
            ("none", Json::Null),
        ]);
        let text = tree.render();
        assert!(text.is_ascii());
        assert!(text.contains("\"name\": \"a\\u2192b\""));
        assert!(text.contains("\"values\": [1.00000000000, 0.500000000000]"));
        assert_eq!(text, tree.render());
    }

    #[test]
    fn csv_rows_join_with_commas() {
        let mut csv = Csv::new(&["target", "n"]);
        csv.row(["ab", "3"]);
        assert_eq!(csv.finish(), "target,n\nab,3\n");
    }
}
