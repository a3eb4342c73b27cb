use std::fmt;

use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Var(String),
    Int(i64),
    Str(String),
    /// `:-`
    If,
    /// `:~`
    WeakIf,
    Dot,
    Comma,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Amp,
    Bar,
    Not,
    At,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "identifier `{s}`"),
            TokenKind::Var(s) => write!(f, "variable `{s}`"),
            TokenKind::Int(n) => write!(f, "integer `{n}`"),
            TokenKind::Str(s) => write!(f, "string {s:?}"),
            TokenKind::If => f.write_str("`:-`"),
            TokenKind::WeakIf => f.write_str("`:~`"),
            TokenKind::Dot => f.write_str("`.`"),
            TokenKind::Comma => f.write_str("`,`"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
            TokenKind::LBracket => f.write_str("`[`"),
            TokenKind::RBracket => f.write_str("`]`"),
            TokenKind::Amp => f.write_str("`&`"),
            TokenKind::Bar => f.write_str("`|`"),
            TokenKind::Not => f.write_str("`not`"),
            TokenKind::At => f.write_str("`@`"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn take_while(&mut self, mut pred: impl FnMut(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits program text into tokens. `%` starts a comment running to the end
/// of the line.
pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    while let Some(c) = cur.peek() {
        let (line, column) = (cur.line, cur.column);
        let err = |msg: String| ParseError::new(line, column, msg);
        let kind = match c {
            c if c.is_whitespace() => {
                cur.bump();
                continue;
            }
            '%' => {
                cur.take_while(|c| c != '\n');
                continue;
            }
            c if c.is_ascii_lowercase() => {
                let word = cur.take_while(is_word_char);
                if word == "not" {
                    TokenKind::Not
                } else {
                    TokenKind::Ident(word)
                }
            }
            c if c.is_ascii_uppercase() => TokenKind::Var(cur.take_while(is_word_char)),
            c if c.is_ascii_digit() || c == '-' => {
                cur.bump();
                let mut digits = String::from(c);
                digits.push_str(&cur.take_while(|c| c.is_ascii_digit()));
                if digits == "-" {
                    return Err(err("`-` must be followed by digits".into()));
                }
                if cur.peek().is_some_and(is_word_char) {
                    return Err(err(format!("malformed number starting with `{digits}`")));
                }
                let n = digits
                    .parse::<i64>()
                    .map_err(|_| err(format!("integer `{digits}` out of range")))?;
                TokenKind::Int(n)
            }
            '"' => {
                cur.bump();
                let mut s = String::new();
                loop {
                    match cur.bump() {
                        None | Some('\n') => return Err(err("unterminated string".into())),
                        Some('"') => break,
                        Some('\\') => match cur.bump() {
                            Some('"') => s.push('"'),
                            Some('\\') => s.push('\\'),
                            Some('n') => s.push('\n'),
                            _ => return Err(err("invalid escape in string".into())),
                        },
                        Some(c) => s.push(c),
                    }
                }
                TokenKind::Str(s)
            }
            ':' => {
                cur.bump();
                match cur.bump() {
                    Some('-') => TokenKind::If,
                    Some('~') => TokenKind::WeakIf,
                    _ => return Err(err("expected `:-` or `:~`".into())),
                }
            }
            _ => {
                cur.bump();
                match c {
                    '.' => TokenKind::Dot,
                    ',' => TokenKind::Comma,
                    '(' => TokenKind::LParen,
                    ')' => TokenKind::RParen,
                    '[' => TokenKind::LBracket,
                    ']' => TokenKind::RBracket,
                    '&' => TokenKind::Amp,
                    '|' => TokenKind::Bar,
                    '@' => TokenKind::At,
                    other => return Err(err(format!("illegal character `{other}`"))),
                }
            }
        };
        tokens.push(Token { kind, line, column });
    }
    Ok(tokens)
}
