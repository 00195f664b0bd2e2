//! Spoken English numerals: `zero` through `nine hundred ninety nine`, with an
//! optional `point` followed by digit words. Plain digit strings such as
//! `45` or `2.1` are accepted as well, since recognizers often emit those.

use super::similarity::normalize;

const DIGITS: [&str; 10] = [
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine",
];

const TEENS: [&str; 10] = [
    "ten",
    "eleven",
    "twelve",
    "thirteen",
    "fourteen",
    "fifteen",
    "sixteen",
    "seventeen",
    "eighteen",
    "nineteen",
];

const TENS: [&str; 8] = [
    "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety",
];

fn digit(word: &str) -> Option<u32> {
    DIGITS.iter().position(|w| *w == word).map(|i| i as u32)
}

fn nonzero_digit(word: &str) -> Option<u32> {
    digit(word).filter(|&d| d > 0)
}

fn teen(word: &str) -> Option<u32> {
    TEENS.iter().position(|w| *w == word).map(|i| 10 + i as u32)
}

fn tens(word: &str) -> Option<u32> {
    TENS.iter()
        .position(|w| *w == word)
        .map(|i| 20 + 10 * i as u32)
}

/// Parses a whole transcript as a number, or returns `None` if any part of
/// it is not a number phrase.
pub fn parse_number(transcript: &str) -> Option<f64> {
    let text = normalize(transcript);
    if text.is_empty() {
        return None;
    }
    if let Some(value) = parse_digits(&text) {
        return Some(value);
    }
    let spaced = text.replace('-', " ");
    let words: Vec<&str> = spaced.split_whitespace().collect();
    parse_words(&words)
}

fn parse_digits(text: &str) -> Option<f64> {
    let (int, frac) = match text.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (text, None),
    };
    let all_digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(int) || !frac.is_none_or(all_digits) {
        return None;
    }
    text.parse().ok()
}

fn parse_words(words: &[&str]) -> Option<f64> {
    let (int_words, frac_words) = match words.iter().position(|w| *w == "point") {
        Some(i) => (&words[..i], Some(&words[i + 1..])),
        None => (words, None),
    };

    let integer = if int_words.is_empty() {
        // "point five" on its own
        frac_words?;
        0
    } else {
        parse_integer(int_words)?
    };

    let mut rendered = integer.to_string();
    if let Some(frac) = frac_words {
        if frac.is_empty() {
            return None;
        }
        rendered.push('.');
        for w in frac {
            rendered.push(char::from_digit(digit(w)?, 10)?);
        }
    }
    rendered.parse().ok()
}

fn parse_integer(words: &[&str]) -> Option<u32> {
    if words == ["zero"] {
        return Some(0);
    }
    let (hundreds, rest) = match words.iter().position(|w| *w == "hundred") {
        Some(i) => {
            let count = match &words[..i] {
                [] | ["a"] => 1,
                [w] => nonzero_digit(w)?,
                _ => return None,
            };
            let mut rest = &words[i + 1..];
            if rest.first() == Some(&"and") {
                rest = &rest[1..];
                if rest.is_empty() {
                    return None;
                }
            }
            (count * 100, rest)
        }
        None => (0, words),
    };
    Some(hundreds + parse_below_hundred(rest, hundreds > 0)?)
}

fn parse_below_hundred(words: &[&str], may_be_empty: bool) -> Option<u32> {
    match words {
        [] if may_be_empty => Some(0),
        [w] => nonzero_digit(w).or_else(|| teen(w)).or_else(|| tens(w)),
        [t, u] => Some(tens(t)? + nonzero_digit(u)?),
        _ => None,
    }
}
