//! Textual formats for reduced Motzkin words.

use infmot::motzkin::MotzkinWord;
use infmot::Error;

/// Parses a word from digits (`12321`), comma-separated letters
/// (`1,2,3,2,1`), or steps over `U`, `H`, `D` (`UUDD`, empty for the
/// one-letter word).
pub fn parse_word(text: &str) -> Result<MotzkinWord, Error> {
    let trimmed = text.trim();
    if trimmed.contains(',') {
        let letters = trimmed
            .split(',')
            .map(|part| part.trim().parse::<u32>().unwrap_or(0))
            .collect::<Vec<_>>();
        return MotzkinWord::new(letters);
    }
    if trimmed.is_empty()
        || trimmed
            .chars()
            .all(|c| matches!(c, 'U' | 'H' | 'D' | 'u' | 'h' | 'd'))
    {
        return parse_steps(trimmed);
    }
    let letters = trimmed
        .chars()
        .map(|c| c.to_digit(10).unwrap_or(0))
        .collect::<Vec<_>>();
    MotzkinWord::new(letters)
}

fn parse_steps(steps: &str) -> Result<MotzkinWord, Error> {
    let mut letters = vec![1u32];
    for (index, step) in steps.chars().enumerate() {
        let last = *letters.last().expect("letters start nonempty");
        let next = match step.to_ascii_uppercase() {
            'U' => last + 1,
            'H' => last,
            _ => {
                if last == 1 {
                    return Err(Error::NonPositiveLetter {
                        position: index + 2,
                    });
                }
                last - 1
            }
        };
        letters.push(next);
    }
    MotzkinWord::new(letters)
}

/// Renders a word as `U`/`H`/`D` steps; the one-letter word renders
/// as the empty string.
pub fn render_steps(word: &MotzkinWord) -> String {
    word.letters()
        .windows(2)
        .map(|pair| match pair[1].cmp(&pair[0]) {
            std::cmp::Ordering::Greater => 'U',
            std::cmp::Ordering::Equal => 'H',
            std::cmp::Ordering::Less => 'D',
        })
        .collect()
}

/// Renders a word as comma-separated letters.
pub fn render_letters(word: &MotzkinWord) -> String {
    word.letters()
        .iter()
        .map(|letter| letter.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digit_and_comma_forms_agree() {
        assert_eq!(
            parse_word("12321").unwrap(),
            parse_word("1,2,3,2,1").unwrap()
        );
    }

    #[test]
    fn step_form_round_trips() {
        let word = parse_word("12321").unwrap();
        assert_eq!(render_steps(&word), "UUDD");
        assert_eq!(parse_word("UUDD").unwrap(), word);
        assert_eq!(parse_word("").unwrap(), parse_word("1").unwrap());
    }

    #[test]
    fn bad_letters_are_rejected() {
        assert!(parse_word("102").is_err());
        assert!(parse_word("2").is_err());
        assert!(parse_word("13").is_err());
    }
}
