//! Shared test support: frozen known-answer vectors and a naive reference
//! cipher written straight from the definitions.
#![allow(dead_code)]

pub struct Kat {
    pub radius: usize,
    pub block_bits: usize,
    pub rounds: usize,
    pub key: &'static str,
    pub plaintext: &'static str,
    pub ciphertext: &'static str,
}

/// Produced once by an independent, definition-level implementation.
pub const KAT: &[Kat] = &[
    Kat { radius: 1, block_bits: 8, rounds: 8, key: "7:L", plaintext: "4F", ciphertext: "91" },
    Kat { radius: 1, block_bits: 8, rounds: 8, key: "D:R", plaintext: "B1", ciphertext: "AF" },
    Kat { radius: 2, block_bits: 32, rounds: 32, key: "DC9C:L", plaintext: "13DCF15D", ciphertext: "05E4D031" },
    Kat { radius: 2, block_bits: 32, rounds: 32, key: "C323:R", plaintext: "8D8F9326", ciphertext: "BEFDEF35" },
    Kat { radius: 4, block_bits: 128, rounds: 128, key: "EA2BCF4CEC2D88B330AFCD73EFC0B61266F7ABE6E4851370764CCB30F8AACA44:L", plaintext: "00000000000000000000000000000000", ciphertext: "E8F79323E258BBA3D8CD252809750325" },
    Kat { radius: 4, block_bits: 128, rounds: 128, key: "D713BB09B97C72A515FF9B2B7F685CAA345CA93C515E044C96459807BC35A874:R", plaintext: "00000000000000000000000000000000", ciphertext: "423819DF04D33716E0084DD4AD53D95C" },
    Kat { radius: 4, block_bits: 128, rounds: 128, key: "25AF2FC560E72120A7AB9E78D7BBE8AFE2B4F37FA1EF7CDB1AFAF332184B71CA:L", plaintext: "FFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFF", ciphertext: "34984D5604307E6A745F0E6147569EA7" },
    Kat { radius: 4, block_bits: 128, rounds: 128, key: "116D33A280D2B05086A5C003574C76DAE6F3EDD444497FB179447C1A8CDC2FC0:R", plaintext: "FFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFF", ciphertext: "F457CDDB73EA9F32CEEF277539BD1777" },
    Kat { radius: 4, block_bits: 128, rounds: 128, key: "F17DDF76B370F040B3087DE3DA876CFD85517949AD2076B10195AF952ED80FF6:L", plaintext: "7A7672962EB01039315F94668F8408FE", ciphertext: "001B04CDE6D7D2891B7832251D6F3B15" },
    Kat { radius: 4, block_bits: 128, rounds: 128, key: "61BEF0A6C3382112EC36A2BC7843D3782B2DB6E5C5A207F44532DCD5ED3F238D:R", plaintext: "5D7DD9B84AE5E11E59A4B88E5CA8792C", ciphertext: "416423A06ADDB11468E890FD3C23ECB5" },
    Kat { radius: 4, block_bits: 128, rounds: 128, key: "1B4A08B1CE4C6EF3F3C752A76C4EBE0405423E2D9200CA5B3888B3749FF46224:L", plaintext: "3AEE3515F03D91CADD147E1C4D313C28", ciphertext: "A30E5B3585C662D7157BE2E8271944A9" },
    Kat { radius: 4, block_bits: 128, rounds: 128, key: "3D78788515BA78899C22D3BB60987EE27F815DB0A30108E9C16F50FF80B05201:R", plaintext: "DF084B1E006C86CBD2B2E889FCF48D83", ciphertext: "8A9E893F22B5E8A63A0DA69FD6A26414" },
    Kat { radius: 4, block_bits: 128, rounds: 128, key: "BE74528DA32D3FC5A7F37DBEF5C489A7AFA1C52B46ED3BFB3C96CA78C4923245:L", plaintext: "842155E39026ED9D1CFACBC9B2010C60", ciphertext: "7689A651E72D754A7EF72A5195336947" },
    Kat { radius: 4, block_bits: 128, rounds: 128, key: "DE79E9D978DE5FF09B062256B4DE07E11A6C11234B7BCB4DBA2229E23290D30E:R", plaintext: "3CF9CA219969C363899C3F3150C67B11", ciphertext: "D1F7FD5F0F500FEFE151B4995A3E4172" },
    Kat { radius: 4, block_bits: 256, rounds: 256, key: "A99A27D349BD76621BE0F754450EF4AA81CCE32C6867E8ACD63EAB3D9E8FC473:L", plaintext: "F6AA93415EFB6FE116A23A55C96A1DBE2FF6A5D63AF4D9DB2568172AB0E95177", ciphertext: "03910F229B45D830B2DAE053051838340930BDE5689ED5105BF99990E41CD251" },
];

/// Rule tables for one round key: `(main, border, direction bit)`.
fn tables(round_key: &[u8], radius: usize) -> (Vec<u8>, Vec<u8>, u8) {
    let (rule_bits, dir) = round_key.split_at(round_key.len() - 1);
    let dir = dir[0];
    let span = 2 * radius;
    let main: Vec<u8> = if dir == 0 {
        rule_bits.iter().copied().chain(rule_bits.iter().map(|b| 1 - b)).collect()
    } else {
        rule_bits.iter().flat_map(|&b| [b, 1 - b]).collect()
    };
    let c = 1 - rule_bits[0];
    let border = (0..main.len())
        .map(|n| if dir == 0 { ((n >> span) & 1) as u8 ^ c } else { (n & 1) as u8 ^ c })
        .collect();
    (main, border, dir)
}

fn neighborhood(p: &[u8], i: usize, radius: usize) -> usize {
    let n = p.len() as isize;
    (-(radius as isize)..=radius as isize)
        .fold(0, |acc, d| (acc << 1) | p[((i as isize + d).rem_euclid(n)) as usize] as usize)
}

pub fn naive_forward(p: &[u8], main: &[u8], border: &[u8], radius: usize) -> Vec<u8> {
    (0..p.len())
        .map(|i| if i < 2 * radius { border[neighborhood(p, i, radius)] } else { main[neighborhood(p, i, radius)] })
        .collect()
}

/// Solves one unknown cell at a time by trying both values.
pub fn naive_preimage(s: &[u8], main: &[u8], border: &[u8], dir: u8, radius: usize) -> Vec<u8> {
    let n = s.len();
    let target = |i: usize| if dir == 0 { (i + n - radius) % n } else { (i + radius) % n };
    let mut p = vec![0u8; n];
    for i in 0..2 * radius {
        let t = target(i);
        p[t] = (0..2).find(|&v| { p[t] = v; border[neighborhood(&p, i, radius)] == s[i] }).unwrap();
    }
    let order: Vec<usize> = if dir == 0 { (2 * radius..n).rev().collect() } else { (2 * radius..n).collect() };
    for i in order {
        let t = target(i);
        let fits: Vec<u8> = (0..2).filter(|&v| { p[t] = v; main[neighborhood(&p, i, radius)] == s[i] }).collect();
        assert_eq!(fits.len(), 1);
        p[t] = fits[0];
    }
    assert_eq!(naive_forward(&p, main, border, radius), s);
    p
}

fn rotate(x: &[u8], k: usize, dir: u8) -> Vec<u8> {
    let n = x.len();
    (0..n).map(|j| if dir == 0 { x[(j + k) % n] } else { x[(j + n - k % n) % n] }).collect()
}

fn rotated_key(key: &[u8], by: usize) -> Vec<u8> {
    let by = by % key.len();
    key[by..].iter().chain(&key[..by]).copied().collect()
}

pub fn naive_encrypt(p: &[u8], key: &[u8], radius: usize, rounds: usize) -> Vec<u8> {
    let mut s = p.to_vec();
    for t in 0..rounds {
        let (main, border, dir) = tables(&rotated_key(key, t), radius);
        s = naive_preimage(&s, &main, &border, dir, radius);
        s = rotate(&s, 2 * radius, 1 - dir);
    }
    s
}

pub fn naive_decrypt(c: &[u8], key: &[u8], radius: usize, rounds: usize) -> Vec<u8> {
    let mut s = c.to_vec();
    for t in (0..rounds).rev() {
        let (main, border, dir) = tables(&rotated_key(key, t), radius);
        s = rotate(&s, 2 * radius, dir);
        s = naive_forward(&s, &main, &border, radius);
    }
    s
}
