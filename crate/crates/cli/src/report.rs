use serde_json::{Map, Number, Value};

/// One top-level report object per run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub parameters: Value,
    pub results: Value,
    pub pass: bool,
    /// Wall-clock seconds; only present with `--timing` since it breaks
    /// byte-identical reruns.
    pub elapsed: Option<f64>,
}

impl RunReport {
    pub fn new(command: &str, parameters: Value, results: Value, pass: bool) -> Self {
        Self {
            command: command.to_owned(),
            parameters,
            results,
            pass,
            elapsed: None,
        }
    }

    pub fn to_value(&self) -> Value {
        let mut map = Map::new();
        map.insert("command".into(), Value::String(self.command.clone()));
        map.insert("parameters".into(), self.parameters.clone());
        map.insert("results".into(), self.results.clone());
        map.insert("pass".into(), Value::Bool(self.pass));
        if let Some(t) = self.elapsed {
            map.insert("elapsed_seconds".into(), t.into());
        }
        round_floats(Value::Object(map))
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("plain JSON value");
        s.push('\n');
        s
    }

    pub fn exit_code(&self) -> u8 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

/// Rounds to 15 significant digits; non-finite values become `null`.
pub fn round_sig15(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let r: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
    let r = if r == 0.0 { 0.0 } else { r };
    Number::from_f64(r).map_or(Value::Null, Value::Number)
}

fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => round_sig15(n.as_f64().expect("f64 number")),
        Value::Array(items) => Value::Array(items.into_iter().map(round_floats).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, round_floats(v))).collect())
        }
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rounds_to_fifteen_digits() {
        assert_eq!(round_sig15(0.1 + 0.2), json!(0.3));
        assert_eq!(round_sig15(1.0 / 3.0), json!(0.333333333333333));
        assert_eq!(round_sig15(-0.0), json!(0.0));
        assert_eq!(round_sig15(f64::NAN), Value::Null);
    }

    #[test]
    fn keys_are_sorted() {
        let r = RunReport::new("x", json!({"b": 1, "a": 2}), json!({}), true);
        let s = r.render();
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
        assert!(s.find("\"command\"").unwrap() < s.find("\"parameters\"").unwrap());
    }
}
