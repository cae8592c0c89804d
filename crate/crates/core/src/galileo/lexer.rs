//! Tokenizer for the Galileo dialect.

use num_rational::BigRational;

use super::parser::ParseError;
use crate::parse_rational;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Token {
    /// `"name"`
    Str(String),
    /// Bare identifier: keywords, gate kinds, attribute keys, parameters.
    Ident(String),
    Number(BigRational),
    /// `<k>of<n>` voting gate spec.
    VotSpec(u32, u32),
    Equals,
    Semicolon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Span {
    pub line: usize,
    pub col: usize,
}

pub(crate) fn lex(text: &str) -> Result<Vec<(Token, Span)>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1usize;
    let mut col = 1usize;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let span = Span { line, col };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            ';' => {
                bump!();
                tokens.push((Token::Semicolon, span));
            }
            '=' => {
                bump!();
                tokens.push((Token::Equals, span));
            }
            '"' => {
                bump!();
                let mut s = String::new();
                loop {
                    match chars.peek() {
                        None => {
                            return Err(ParseError::at(span, "unterminated string".into()));
                        }
                        Some('\n') => {
                            return Err(ParseError::at(span, "unterminated string (newline inside quotes)".into()));
                        }
                        Some('"') => {
                            bump!();
                            break;
                        }
                        Some(&c) => {
                            s.push(c);
                            bump!();
                        }
                    }
                }
                tokens.push((Token::Str(s), span));
            }
            c if c.is_ascii_alphanumeric() || c == '_' || c == '-' => {
                let mut word = String::new();
                let negative = c == '-';
                if negative {
                    bump!();
                    word.push('-');
                    if !chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                        return Err(ParseError::at(span, "expected a digit after `-`".into()));
                    }
                }
                // One alphanumeric/underscore run, optionally extended with
                // `.` or `/` inside numbers (11.5, 3/2).
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        word.push(c);
                        bump!();
                    } else if (c == '.' || c == '/')
                        && word.chars().last().is_some_and(|l| l.is_ascii_digit())
                        && !word.contains('.')
                        && !word.contains('/')
                    {
                        word.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                tokens.push((classify_word(&word, span)?, span));
            }
            other => {
                return Err(ParseError::at(span, format!("unexpected character `{other}`")));
            }
        }
    }
    Ok(tokens)
}

/// Decides whether a bare word is a number, a voting spec, or an identifier.
/// Words that start with a digit but are none of the former are rejected, so
/// a numeric literal can never turn into a parameter name.
fn classify_word(word: &str, span: Span) -> Result<Token, ParseError> {
    let first = word.chars().next().expect("word nonempty");
    if first.is_ascii_digit() || first == '-' {
        if let Some(r) = parse_rational(word) {
            return Ok(Token::Number(r));
        }
        if let Some((k, n)) = parse_vot_spec(word) {
            return Ok(Token::VotSpec(k, n));
        }
        return Err(ParseError::at(
            span,
            format!("malformed number `{word}` (parameter names must not start with a digit)"),
        ));
    }
    debug_assert!(first.is_ascii_alphabetic() || first == '_');
    if word.contains('.') || word.contains('/') {
        return Err(ParseError::at(span, format!("malformed identifier `{word}`")));
    }
    Ok(Token::Ident(word.to_string()))
}

fn parse_vot_spec(word: &str) -> Option<(u32, u32)> {
    let (k, n) = word.split_once("of")?;
    if k.is_empty() || n.is_empty() {
        return None;
    }
    if !k.bytes().all(|b| b.is_ascii_digit()) || !n.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some((k.parse().ok()?, n.parse().ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn lexes_the_paper_example_line() {
        let toks = lex("\"B\" mintime=50 maxtime=100 cost=50;").unwrap();
        let kinds: Vec<Token> = toks.into_iter().map(|(t, _)| t).collect();
        assert_eq!(
            kinds,
            vec![
                Token::Str("B".into()),
                Token::Ident("mintime".into()),
                Token::Equals,
                Token::Number(rat(50, 1)),
                Token::Ident("maxtime".into()),
                Token::Equals,
                Token::Number(rat(100, 1)),
                Token::Ident("cost".into()),
                Token::Equals,
                Token::Number(rat(50, 1)),
                Token::Semicolon,
            ]
        );
    }

    #[test]
    fn lexes_rationals_and_decimals() {
        let toks = lex("time=11.5 cost=3/2;").unwrap();
        assert!(toks.iter().any(|(t, _)| *t == Token::Number(rat(23, 2))));
        assert!(toks.iter().any(|(t, _)| *t == Token::Number(rat(3, 2))));
    }

    #[test]
    fn lexes_vot_spec() {
        let toks = lex("\"g\" 2of3 \"a\" \"b\" \"c\";").unwrap();
        assert!(toks.iter().any(|(t, _)| *t == Token::VotSpec(2, 3)));
    }

    #[test]
    fn comments_run_to_end_of_line() {
        let toks = lex("# header\ntoplevel \"A\"; # trailing\n").unwrap();
        assert_eq!(toks.len(), 3);
        assert_eq!(toks[0].0, Token::Ident("toplevel".into()));
        assert_eq!(toks[0].1, Span { line: 2, col: 1 });
    }

    #[test]
    fn rejects_digit_leading_identifiers() {
        let err = lex("cost=5abc;").unwrap_err();
        assert!(err.to_string().contains("malformed number"), "{err}");
    }

    #[test]
    fn rejects_unterminated_string() {
        let err = lex("\"open").unwrap_err();
        assert!(err.to_string().contains("unterminated"), "{err}");
    }

    #[test]
    fn tracks_line_and_column() {
        let toks = lex("toplevel \"A\";\n\"A\" or \"B\" \"C\";").unwrap();
        let semi_spans: Vec<Span> = toks
            .iter()
            .filter(|(t, _)| *t == Token::Semicolon)
            .map(|&(_, s)| s)
            .collect();
        assert_eq!(semi_spans[0], Span { line: 1, col: 13 });
        assert_eq!(semi_spans[1], Span { line: 2, col: 15 });
    }

    #[test]
    fn negative_numbers_lex() {
        let toks = lex("damage=-5;").unwrap();
        assert!(toks.iter().any(|(t, _)| *t == Token::Number(rat(-5, 1))));
    }
}
