//! Small helpers over packed `u64` bit vectors (bit `i` lives in word
//! `i / 64` at position `i % 64`).

pub const WORD_BITS: usize = 64;

#[inline]
pub fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

#[inline]
pub fn get(words: &[u64], i: usize) -> bool {
    words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
}

#[inline]
pub fn set(words: &mut [u64], i: usize) {
    words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
}

#[inline]
pub fn clear(words: &mut [u64], i: usize) {
    words[i / WORD_BITS] &= !(1 << (i % WORD_BITS));
}

#[inline]
pub fn count(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
pub fn is_zero(words: &[u64]) -> bool {
    words.iter().all(|&w| w == 0)
}

/// `a ⊆ b`
#[inline]
pub fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

#[inline]
pub fn or_assign(acc: &mut [u64], other: &[u64]) {
    for (a, b) in acc.iter_mut().zip(other) {
        *a |= b;
    }
}

/// Indices of the set bits, ascending.
pub fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut rest = w;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD_BITS + b)
            }
        })
    })
}

/// Position of the `rank`-th (0-based) set bit, if any.
pub fn select(words: &[u64], mut rank: usize) -> Option<usize> {
    for (wi, &w) in words.iter().enumerate() {
        let c = w.count_ones() as usize;
        if rank < c {
            let mut rest = w;
            for _ in 0..rank {
                rest &= rest - 1;
            }
            return Some(wi * WORD_BITS + rest.trailing_zeros() as usize);
        }
        rank -= c;
    }
    None
}

/// First set bit at a position `>= from`, if any.
pub fn next_one(words: &[u64], from: usize) -> Option<usize> {
    let mut wi = from / WORD_BITS;
    if wi >= words.len() {
        return None;
    }
    let mut w = words[wi] & (!0u64 << (from % WORD_BITS));
    loop {
        if w != 0 {
            return Some(wi * WORD_BITS + w.trailing_zeros() as usize);
        }
        wi += 1;
        if wi == words.len() {
            return None;
        }
        w = words[wi];
    }
}

/// Last set bit at a position `<= upto`, if any.
pub fn prev_one(words: &[u64], upto: usize) -> Option<usize> {
    let mut wi = (upto / WORD_BITS).min(words.len().checked_sub(1)?);
    let shift = if wi == upto / WORD_BITS {
        WORD_BITS - 1 - upto % WORD_BITS
    } else {
        0
    };
    let mut w = words[wi] & (!0u64 >> shift);
    loop {
        if w != 0 {
            return Some(wi * WORD_BITS + (WORD_BITS - 1 - w.leading_zeros() as usize));
        }
        if wi == 0 {
            return None;
        }
        wi -= 1;
        w = words[wi];
    }
}

/// Number of set bits strictly below position `i`.
pub fn rank(words: &[u64], i: usize) -> usize {
    let full = i / WORD_BITS;
    let mut r = count(&words[..full]);
    let rem = i % WORD_BITS;
    if rem > 0 {
        r += (words[full] & ((1u64 << rem) - 1)).count_ones() as usize;
    }
    r
}
