//! Minimal Unicode composition for the handful of combining marks the
//! notation uses, so data files and corpora can be written in either
//! composed or decomposed form.

/// Composes `s` into the precomposed characters the engine works with.
///
/// Only U+0304 (combining macron, on vowels) and U+030C (combining caron, on
/// s/z/c) are accepted; any other combining mark in U+0300..=U+036F is an
/// error. Returns the composed string or a message describing the offending
/// character.
pub fn compose_nfc(s: &str) -> Result<String, String> {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '\u{0304}' => {
                let prev = out
                    .pop()
                    .ok_or("combining macron with nothing to combine")?;
                out.push(
                    macron(prev)
                        .ok_or_else(|| format!("combining macron cannot apply to {prev:?}"))?,
                );
            }
            '\u{030C}' => {
                let prev = out.pop().ok_or("combining caron with nothing to combine")?;
                out.push(
                    caron(prev)
                        .ok_or_else(|| format!("combining caron cannot apply to {prev:?}"))?,
                );
            }
            '\u{0300}'..='\u{036F}' => {
                return Err(format!("unsupported combining mark U+{:04X}", ch as u32));
            }
            _ => out.push(ch),
        }
    }
    Ok(out)
}

fn macron(base: char) -> Option<char> {
    Some(match base {
        'a' => 'ā',
        'e' => 'ē',
        'i' => 'ī',
        'o' => 'ō',
        'u' => 'ū',
        'A' => 'Ā',
        'E' => 'Ē',
        'I' => 'Ī',
        'O' => 'Ō',
        'U' => 'Ū',
        _ => return None,
    })
}

fn caron(base: char) -> Option<char> {
    Some(match base {
        's' => 'š',
        'S' => 'Š',
        'z' => 'ž',
        'Z' => 'Ž',
        'c' => 'č',
        'C' => 'Č',
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composes_macron_and_caron() {
        assert_eq!(compose_nfc("s\u{030C}a\u{0304}n").unwrap(), "šān");
        assert_eq!(compose_nfc("šān").unwrap(), "šān");
    }

    #[test]
    fn rejects_unknown_combining_marks() {
        assert!(compose_nfc("a\u{0301}").is_err());
        assert!(compose_nfc("q\u{0304}").is_err());
        assert!(compose_nfc("\u{0304}x").is_err());
    }
}
