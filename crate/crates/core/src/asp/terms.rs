use std::cmp::Ordering;

enum Term<'a> {
    Number(i64),
    Constant(&'a str),
    Str(&'a str),
}

fn classify(name: &str) -> Term<'_> {
    if let Ok(v) = name.parse::<i64>() {
        if v.to_string() == name {
            return Term::Number(v);
        }
    }
    let mut chars = name.chars();
    let ident = matches!(chars.next(), Some('a'..='z')) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ident && name != "not" {
        Term::Constant(name)
    } else {
        Term::Str(name)
    }
}

/// An element name as a ground term: integers and lowercase identifiers
/// stay bare, everything else becomes a quoted string.
pub fn render_term(name: &str) -> String {
    match classify(name) {
        Term::Number(_) | Term::Constant(_) => name.to_string(),
        Term::Str(s) => {
            let mut out = String::with_capacity(s.len() + 2);
            out.push('"');
            for c in s.chars() {
                match c {
                    '"' => out.push_str("\\\""),
                    '\\' => out.push_str("\\\\"),
                    '\n' => out.push_str("\\n"),
                    c => out.push(c),
                }
            }
            out.push('"');
            out
        }
    }
}

/// The solver's term order on rendered names: numbers, then constants, then
/// strings.
pub fn compare_terms(a: &str, b: &str) -> Ordering {
    fn rank(t: &Term<'_>) -> u8 {
        match t {
            Term::Number(_) => 0,
            Term::Constant(_) => 1,
            Term::Str(_) => 2,
        }
    }
    let (ta, tb) = (classify(a), classify(b));
    match (&ta, &tb) {
        (Term::Number(x), Term::Number(y)) => x.cmp(y),
        (Term::Constant(x), Term::Constant(y)) | (Term::Str(x), Term::Str(y)) => x.cmp(y),
        _ => rank(&ta).cmp(&rank(&tb)),
    }
}
