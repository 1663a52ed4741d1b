//! Finite words over small alphabets, morphisms, and the generators for the
//! Thue–Morse family and paperfolding words.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Deref;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest alphabet a [`FiniteWord`] may carry.
pub const MAX_ALPHABET: u8 = 4;

/// A letter is a small integer below the alphabet size of its word.
pub type Letter = u8;

/// A finite word over `{0, .., alphabet_size - 1}`.
///
/// Equality, ordering and hashing look only at the letter sequence.
#[derive(Clone, Debug)]
pub struct FiniteWord {
    letters: Vec<Letter>,
    alphabet_size: u8,
}

impl FiniteWord {
    pub fn new(letters: Vec<Letter>, alphabet_size: u8) -> Result<Self> {
        if alphabet_size == 0 || alphabet_size > MAX_ALPHABET {
            return Err(Error::Parameter(format!(
                "alphabet size {alphabet_size} outside [1, {MAX_ALPHABET}]"
            )));
        }
        if let Some(&bad) = letters.iter().find(|&&l| l >= alphabet_size) {
            return Err(Error::Domain(format!(
                "letter {bad} outside alphabet of size {alphabet_size}"
            )));
        }
        Ok(Self {
            letters,
            alphabet_size,
        })
    }

    pub fn binary(letters: Vec<Letter>) -> Result<Self> {
        Self::new(letters, 2)
    }

    pub fn empty(alphabet_size: u8) -> Self {
        Self {
            letters: Vec::new(),
            alphabet_size: alphabet_size.clamp(1, MAX_ALPHABET),
        }
    }

    /// Parses an ASCII digit string over an explicit alphabet.
    pub fn parse(s: &str, alphabet_size: u8) -> Result<Self> {
        let letters = parse_digits(s)?;
        Self::new(letters, alphabet_size)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn alphabet_size(&self) -> u8 {
        self.alphabet_size
    }

    /// Reinterprets the word over a larger alphabet.
    pub fn widen(&self, alphabet_size: u8) -> Result<Self> {
        Self::new(self.letters.clone(), alphabet_size.max(self.alphabet_size))
    }

    pub fn concat(&self, other: &FiniteWord) -> FiniteWord {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        FiniteWord {
            letters,
            alphabet_size: self.alphabet_size.max(other.alphabet_size),
        }
    }

    /// The factor `[start, end)` as a word over the same alphabet.
    pub fn factor(&self, start: usize, end: usize) -> FiniteWord {
        FiniteWord {
            letters: self.letters[start..end].to_vec(),
            alphabet_size: self.alphabet_size,
        }
    }

    /// The conjugate `yx` where `x` is the first `shift` letters.
    pub fn rotate(&self, shift: usize) -> FiniteWord {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            letters.rotate_left(shift % self.len());
        }
        FiniteWord {
            letters,
            alphabet_size: self.alphabet_size,
        }
    }
}

pub(crate) fn parse_digits(s: &str) -> Result<Vec<Letter>> {
    s.trim()
        .bytes()
        .map(|b| match b {
            b'0'..=b'9' => Ok(b - b'0'),
            _ => Err(Error::Domain(format!(
                "unexpected character {:?} in word",
                b as char
            ))),
        })
        .collect()
}

impl Deref for FiniteWord {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.letters
    }
}

impl AsRef<[Letter]> for FiniteWord {
    fn as_ref(&self) -> &[Letter] {
        &self.letters
    }
}

impl PartialEq for FiniteWord {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters
    }
}

impl Eq for FiniteWord {}

impl Hash for FiniteWord {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.letters.hash(state);
    }
}

impl PartialOrd for FiniteWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FiniteWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters.cmp(&other.letters)
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&letters_to_string(&self.letters))
    }
}

/// Parses a digit string; the alphabet is the smallest of size at least 2
/// containing every letter.
impl FromStr for FiniteWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = parse_digits(s)?;
        let size = letters.iter().copied().max().map_or(2, |m| (m + 1).max(2));
        Self::new(letters, size)
    }
}

/// Renders letters as ASCII digits.
pub fn letters_to_string(letters: &[Letter]) -> String {
    letters.iter().map(|&l| char::from(b'0' + l)).collect()
}

/// A non-erasing letter-to-word substitution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    source_alphabet: u8,
    target_alphabet: u8,
    images: Vec<FiniteWord>,
}

impl Morphism {
    /// Builds a morphism from the image of each source letter, in order.
    pub fn new(images: Vec<FiniteWord>, target_alphabet: u8) -> Result<Self> {
        if images.is_empty() || images.len() > MAX_ALPHABET as usize {
            return Err(Error::Parameter(format!(
                "morphism needs between 1 and {MAX_ALPHABET} images, got {}",
                images.len()
            )));
        }
        let mut checked = Vec::with_capacity(images.len());
        for (letter, image) in images.into_iter().enumerate() {
            if image.is_empty() {
                return Err(Error::Parameter(format!("image of {letter} is empty")));
            }
            checked.push(FiniteWord::new(image.into_letters(), target_alphabet)?);
        }
        Ok(Self {
            source_alphabet: checked.len() as u8,
            target_alphabet,
            images: checked,
        })
    }

    /// The Thue–Morse morphism 0 → 01, 1 → 10.
    pub fn thue_morse() -> Self {
        Self::from_digit_images(&["01", "10"], 2)
    }

    /// The coalescing map 0 → 0, 1 → 1, 2 → 1.
    pub fn psi() -> Self {
        Self::from_digit_images(&["0", "1", "1"], 2)
    }

    fn from_digit_images(images: &[&str], target: u8) -> Self {
        let images = images
            .iter()
            .map(|s| FiniteWord::parse(s, target).expect("static image"))
            .collect();
        Self::new(images, target).expect("static morphism")
    }

    pub fn source_alphabet(&self) -> u8 {
        self.source_alphabet
    }

    pub fn target_alphabet(&self) -> u8 {
        self.target_alphabet
    }

    pub fn image(&self, letter: Letter) -> Result<&FiniteWord> {
        self.images.get(letter as usize).ok_or_else(|| {
            Error::Domain(format!(
                "letter {letter} outside morphism domain of size {}",
                self.source_alphabet
            ))
        })
    }

    pub fn apply(&self, w: &[Letter]) -> Result<FiniteWord> {
        let mut out = Vec::with_capacity(w.len() * self.images[0].len());
        for &letter in w {
            out.extend_from_slice(self.image(letter)?);
        }
        Ok(FiniteWord {
            letters: out,
            alphabet_size: self.target_alphabet,
        })
    }

    /// `self` applied `times` times.
    pub fn apply_iter(&self, w: &[Letter], times: usize) -> Result<FiniteWord> {
        let mut cur = FiniteWord::new(w.to_vec(), self.source_alphabet.max(self.target_alphabet))?;
        for _ in 0..times {
            cur = self.apply(&cur)?;
        }
        Ok(cur)
    }

    /// The length-`len` prefix of the fixed point starting with `seed`.
    pub fn iterate_prefix(&self, seed: Letter, len: usize) -> Result<FiniteWord> {
        let image = self.image(seed)?;
        if image[0] != seed || image.len() < 2 {
            return Err(Error::Construction(format!(
                "morphism is not prolongable on {seed}"
            )));
        }
        if self.target_alphabet > self.source_alphabet {
            return Err(Error::Construction(
                "fixed points need an endomorphism".into(),
            ));
        }
        let mut out: Vec<Letter> = Vec::with_capacity(len.max(1));
        out.push(seed);
        let mut cursor = 0;
        while out.len() < len {
            let letter = out[cursor];
            let img = &self.images[letter as usize];
            if cursor == 0 {
                out.extend_from_slice(&img[1..]);
            } else {
                out.extend_from_slice(img);
            }
            cursor += 1;
        }
        out.truncate(len);
        Ok(FiniteWord {
            letters: out,
            alphabet_size: self.target_alphabet,
        })
    }
}

/// Binary digit sum of `n`.
pub fn s2(n: u64) -> u32 {
    n.count_ones()
}

/// Letter `n` of the generalized Thue–Morse word: `s2(n) mod k`.
pub fn tk_letter(n: u64, k: u32) -> Result<Letter> {
    if !(2..=10).contains(&k) {
        return Err(Error::Parameter(format!("k = {k} must lie in [2, 10]")));
    }
    Ok((s2(n) % k) as Letter)
}

/// Prefix of the generalized Thue–Morse word as raw letters.
///
/// Unlike [`FiniteWord`] this is not limited to four letters, since
/// complexity checks run the family up to `k = 5` and beyond.
pub fn tk_prefix(k: u32, len: usize) -> Result<Vec<Letter>> {
    tk_letter(0, k)?;
    Ok((0..len as u64).map(|n| (s2(n) % k) as Letter).collect())
}

/// Unfolding instructions for a paperfolding word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InstructionSequence(Vec<u8>);

impl InstructionSequence {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::Parameter("instruction sequence is empty".into()));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Domain("instructions must be bits".into()));
        }
        Ok(Self(bits))
    }

    /// The `index`-th of the `2^len` sequences of length `len`, first
    /// instruction in the least significant bit.
    pub fn from_index(index: u64, len: usize) -> Result<Self> {
        Self::new((0..len).map(|j| ((index >> j) & 1) as u8).collect())
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for InstructionSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(parse_digits(s)?)
    }
}

/// Raw letters of the paperfolding word `S_K`, where
/// `S_{j+1} = S_j e_{j+1} reverse(complement(S_j))` and `S_0` is empty.
pub fn paperfolding_letters(bits: &[u8]) -> Vec<Letter> {
    let mut word = Vec::with_capacity((1usize << bits.len()) - 1);
    for &e in bits {
        let half = word.len();
        word.push(e);
        for i in (0..half).rev() {
            let c = 1 - word[i];
            word.push(c);
        }
    }
    word
}

pub fn paperfolding_prefix(instr: &InstructionSequence) -> FiniteWord {
    FiniteWord {
        letters: paperfolding_letters(instr.bits()),
        alphabet_size: 2,
    }
}

/// All rotations of `w` in rotation order, repeats kept. The empty word
/// has itself as its only conjugate.
pub fn conjugates(w: &FiniteWord) -> Vec<FiniteWord> {
    if w.is_empty() {
        return vec![w.clone()];
    }
    (0..w.len()).map(|i| w.rotate(i)).collect()
}

/// Length-`len` prefix of the Thue–Morse word.
pub fn thue_morse_prefix(len: usize) -> FiniteWord {
    Morphism::thue_morse()
        .iterate_prefix(0, len)
        .expect("Thue-Morse morphism is prolongable on 0")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FiniteWord {
        s.parse().unwrap()
    }

    #[test]
    fn morphism_examples() {
        let mu = Morphism::thue_morse();
        assert_eq!(mu.apply(&w("0")).unwrap(), w("01"));
        assert_eq!(mu.apply(&[]).unwrap().len(), 0);
        let psi = Morphism::psi();
        assert_eq!(psi.apply(&w("0120")).unwrap(), w("0110"));
    }

    #[test]
    fn morphism_domain_error() {
        let mu = Morphism::thue_morse();
        assert!(matches!(mu.apply(&[0, 2]), Err(Error::Domain(_))));
    }

    #[test]
    fn rejects_erasing_morphism() {
        let images = vec![w("01"), FiniteWord::empty(2)];
        assert!(Morphism::new(images, 2).is_err());
    }

    #[test]
    fn fixed_point_prefixes() {
        let mu = Morphism::thue_morse();
        assert_eq!(
            mu.iterate_prefix(0, 16).unwrap().to_string(),
            "0110100110010110"
        );
        assert_eq!(mu.iterate_prefix(0, 1).unwrap().to_string(), "0");
        assert_eq!(
            mu.iterate_prefix(0, 4).unwrap(),
            mu.apply_iter(&[0], 2).unwrap()
        );
        assert_eq!(mu.iterate_prefix(0, 0).unwrap().len(), 0);
    }

    #[test]
    fn non_prolongable_seed() {
        let psi = Morphism::psi();
        assert!(matches!(
            psi.iterate_prefix(1, 4),
            Err(Error::Construction(_))
        ));
        let swap = Morphism::new(vec![w("10"), w("01")], 2).unwrap();
        assert!(matches!(
            swap.iterate_prefix(0, 4),
            Err(Error::Construction(_))
        ));
    }

    #[test]
    fn digit_sums() {
        assert_eq!(s2(0), 0);
        assert_eq!(s2(7), 3);
        assert_eq!(s2(1024), 1);
    }

    #[test]
    fn generalized_letters() {
        assert_eq!(tk_letter(0, 3).unwrap(), 0);
        assert_eq!(tk_letter(7, 3).unwrap(), 0);
        let t: String = (0..16)
            .map(|n| char::from(b'0' + tk_letter(n, 2).unwrap()))
            .collect();
        assert_eq!(t, "0110100110010110");
        assert!(matches!(tk_letter(3, 1), Err(Error::Parameter(_))));
    }

    #[test]
    fn paperfolding_examples() {
        let pf = |s: &str| paperfolding_prefix(&s.parse().unwrap()).to_string();
        assert_eq!(pf("0"), "0");
        assert_eq!(pf("00"), "001");
        assert_eq!(pf("000"), "0010011");
        assert_eq!(pf("0000").len(), 15);
        assert!("".parse::<InstructionSequence>().is_err());
    }

    #[test]
    fn conjugate_examples() {
        let strs = |v: Vec<FiniteWord>| v.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        assert_eq!(strs(conjugates(&w("011"))), ["011", "110", "101"]);
        assert_eq!(strs(conjugates(&w("00"))), ["00", "00"]);
        assert_eq!(strs(conjugates(&w(""))), [""]);
    }

    #[test]
    fn word_validation() {
        assert!(FiniteWord::parse("012", 2).is_err());
        assert!(FiniteWord::new(vec![0], 5).is_err());
        assert!("01x".parse::<FiniteWord>().is_err());
        assert_eq!(w("0120").alphabet_size(), 3);
        // equality ignores the declared alphabet
        assert_eq!(
            FiniteWord::parse("01", 2).unwrap(),
            FiniteWord::parse("01", 3).unwrap()
        );
    }
}
