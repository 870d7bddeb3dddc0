use polyspace::ratpoly::{format_decimal, parse_rational};
use serde_json::{Map, Value};

/// Adds a `<key>_approx` sibling next to every exact rational, rendered with
/// `digits` decimals and prefixed with `~`.
pub fn add_decimals(v: &mut Value, digits: usize) {
    match v {
        Value::Object(map) => {
            let mut out = Map::new();
            for (k, mut val) in std::mem::take(map) {
                add_decimals(&mut val, digits);
                let approx = approximate(&val, digits);
                out.insert(k.clone(), val);
                if let Some(a) = approx {
                    out.insert(format!("{k}_approx"), a);
                }
            }
            *map = out;
        }
        Value::Array(items) => items.iter_mut().for_each(|x| add_decimals(x, digits)),
        _ => {}
    }
}

fn approximate(v: &Value, digits: usize) -> Option<Value> {
    match v {
        Value::String(s) => {
            rational(s).map(|r| Value::String(format!("~{}", format_decimal(&r, digits))))
        }
        Value::Array(items) if !items.is_empty() => items
            .iter()
            .map(|x| approximate(x, digits))
            .collect::<Option<Vec<_>>>()
            .map(Value::Array),
        _ => None,
    }
}

fn rational(s: &str) -> Option<polyspace::ratpoly::Rational> {
    if s.contains('/') {
        parse_rational(s).ok()
    } else {
        None
    }
}

/// Aligned `key  value` text. Polynomials are written as sums of terms.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    write_block(v, 0, &mut out);
    out
}

fn write_block(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            let width = map.keys().map(|k| k.chars().count()).max().unwrap_or(0);
            for (k, val) in map {
                match inline(val) {
                    Some(s) => out.push_str(&format!("{pad}{k:<width$}  {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}\n"));
                        write_block(val, indent + 2, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match inline(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        write_block(item, indent + 2, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", inline(other).unwrap_or_default())),
    }
}

fn inline(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(x) => Some(x.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => {
            if let Some(p) = polynomial(items) {
                return Some(p);
            }
            let parts = items.iter().map(inline).collect::<Option<Vec<_>>>()?;
            if parts.iter().any(|s| s.contains('\n')) {
                return None;
            }
            Some(format!("[{}]", parts.join(", ")))
        }
        Value::Object(_) => None,
    }
}

fn polynomial(items: &[Value]) -> Option<String> {
    let terms = items
        .iter()
        .map(|t| {
            let coeff = t.get("coeff")?.as_str()?;
            let exps = t.get("exps")?.as_array()?;
            let mut s = format!("({coeff})");
            for (i, e) in exps.iter().enumerate() {
                match e.as_u64()? {
                    0 => {}
                    1 => s.push_str(&format!("*x{}", i + 1)),
                    a => s.push_str(&format!("*x{}^{a}", i + 1)),
                }
            }
            Some(s)
        })
        .collect::<Option<Vec<_>>>()?;
    if terms.is_empty() {
        return None;
    }
    Some(terms.join(" + "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn decimals_sit_next_to_exact_values() {
        let mut v = json!({"value": "1/3", "lengths": ["1/2", "1/4"], "set": "{1,3}"});
        add_decimals(&mut v, 3);
        assert_eq!(
            v,
            json!({"value": "1/3", "value_approx": "~0.333",
                   "lengths": ["1/2", "1/4"], "lengths_approx": ["~0.500", "~0.250"],
                   "set": "{1,3}"})
        );
    }

    #[test]
    fn text_is_aligned() {
        let v = json!({"n": 5, "external": true, "poly": [{"coeff": "1/2", "exps": [2, 0, 1]}]});
        assert_eq!(
            render_text(&v),
            "n         5\nexternal  true\npoly      (1/2)*x1^2*x3\n"
        );
    }

    #[test]
    fn nested_records_are_indented() {
        let v = json!({"rows": [{"a": 1}, {"a": 2}]});
        assert_eq!(render_text(&v), "rows\n  -\n    a  1\n  -\n    a  2\n");
    }
}
