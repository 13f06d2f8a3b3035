use super::{LangError, Position};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Int(u64),
    Cycle,
    Var(u32),
    LParen,
    RParen,
    Comma,
    Plus,
    Star,
    Caret,
    Eq,
    Semi,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Int(v) => format!("integer {v}"),
            Tok::Cycle => "'C'".into(),
            Tok::Var(i) => format!("variable X{i}"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Plus => "'+'".into(),
            Tok::Star => "'*'".into(),
            Tok::Caret => "'^'".into(),
            Tok::Eq => "'='".into(),
            Tok::Semi => "';'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Position,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, LangError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    let (mut line, mut col) = (1usize, 1usize);

    while let Some(&(_, c)) = chars.peek() {
        let pos = Position { line, column: col };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::CharIndices<'_>>| {
            let (_, c) = chars.next().expect("peeked");
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        };
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '+' => Some(Tok::Plus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '=' => Some(Tok::Eq),
            ';' => Some(Tok::Semi),
            'C' => Some(Tok::Cycle),
            _ => None,
        };
        if let Some(tok) = single {
            bump(&mut chars);
            out.push(Token { tok, pos });
            continue;
        }
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c.is_ascii_digit() {
            let digits = take_digits(&mut chars, &mut bump);
            if digits.len() > 1 && digits.starts_with('0') {
                return Err(LangError::syntax(pos, "leading zeros are not allowed"));
            }
            out.push(Token {
                tok: Tok::Int(parse_int(&digits, pos)?),
                pos,
            });
            continue;
        }
        if c == 'X' {
            bump(&mut chars);
            let digits = take_digits(&mut chars, &mut bump);
            if digits.is_empty() || (digits.len() > 1 && digits.starts_with('0')) {
                return Err(LangError::syntax(
                    pos,
                    "expected a variable index after 'X'",
                ));
            }
            let index = parse_int(&digits, pos)?;
            let index = u32::try_from(index).map_err(|_| LangError::NumberOutOfRange { pos })?;
            out.push(Token {
                tok: Tok::Var(index),
                pos,
            });
            continue;
        }
        return Err(LangError::syntax(
            pos,
            format!("unexpected character {c:?}"),
        ));
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Position { line, column: col },
    });
    Ok(out)
}

fn take_digits<I, F>(chars: &mut std::iter::Peekable<I>, bump: &mut F) -> String
where
    I: Iterator<Item = (usize, char)>,
    F: FnMut(&mut std::iter::Peekable<I>),
{
    let mut digits = String::new();
    while let Some(&(_, d)) = chars.peek() {
        if !d.is_ascii_digit() {
            break;
        }
        digits.push(d);
        bump(chars);
    }
    digits
}

fn parse_int(digits: &str, pos: Position) -> Result<u64, LangError> {
    digits
        .parse()
        .map_err(|_| LangError::NumberOutOfRange { pos })
}
