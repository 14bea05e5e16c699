/// Lowercases and tokenizes a sentence. Punctuation marks become their own
/// tokens; apostrophes and hyphens between letters stay inside the word.
pub fn normalize(sentence: &str) -> Vec<String> {
    let chars: Vec<char> = sentence
        .chars()
        .map(|c| if c == '\u{2019}' { '\'' } else { c })
        .collect();
    let mut tokens = Vec::new();
    let mut word = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if c.is_alphanumeric() {
            word.extend(c.to_lowercase());
            continue;
        }
        let joiner = (c == '\'' || c == '-')
            && !word.is_empty()
            && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric());
        if joiner {
            word.push(c);
            continue;
        }
        if !word.is_empty() {
            tokens.push(std::mem::take(&mut word));
        }
        if !c.is_whitespace() {
            tokens.push(c.to_string());
        }
    }
    if !word.is_empty() {
        tokens.push(word);
    }
    tokens
}

pub(crate) fn is_word(token: &str) -> bool {
    token.chars().next().is_some_and(char::is_alphanumeric)
}

pub(crate) fn is_terminal(token: &str) -> bool {
    matches!(token, "." | "!" | "?")
}

/// One literal position of a schema skeleton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum LitTok {
    Word(String),
    /// `a(n)`: matches `a` or `an`
    Article,
    /// `x/y`: matches any alternative
    Alt(Vec<String>),
    Punct(String),
}

impl LitTok {
    pub(crate) fn matches(&self, token: &str) -> bool {
        match self {
            LitTok::Word(w) | LitTok::Punct(w) => w == token,
            LitTok::Article => token == "a" || token == "an",
            LitTok::Alt(alts) => alts.iter().any(|a| a == token),
        }
    }

    pub(crate) fn is_terminal(&self) -> bool {
        matches!(self, LitTok::Punct(p) if is_terminal(p))
    }
}

/// Skeleton tokens of a literal template fragment.
pub(crate) fn literal_tokens(literal: &str) -> Vec<LitTok> {
    let raw = normalize(literal);
    let mut out: Vec<LitTok> = Vec::new();
    let mut i = 0;
    while i < raw.len() {
        let t = raw[i].as_str();
        if t == "a" && raw.get(i + 1..i + 4).is_some_and(|w| w == ["(", "n", ")"]) {
            out.push(LitTok::Article);
            i += 4;
        } else if t == "/"
            && matches!(out.last(), Some(LitTok::Word(_) | LitTok::Alt(_)))
            && raw.get(i + 1).is_some_and(|n| is_word(n))
        {
            let next = raw[i + 1].clone();
            match out.pop() {
                Some(LitTok::Word(w)) => out.push(LitTok::Alt(vec![w, next])),
                Some(LitTok::Alt(mut alts)) => {
                    alts.push(next);
                    out.push(LitTok::Alt(alts));
                }
                _ => unreachable!(),
            }
            i += 2;
        } else if is_word(t) {
            out.push(LitTok::Word(t.to_string()));
            i += 1;
        } else {
            out.push(LitTok::Punct(t.to_string()));
            i += 1;
        }
    }
    out
}
