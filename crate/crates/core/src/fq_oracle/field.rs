//! The fields `F_4`, `F_9`, `F_25` as `F_p[x]/(x^2 − c_1 x − c_0)`, with
//! elements `a + b x` encoded as `a + p b`.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Field {
    q: usize,
    p: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
}

impl Field {
    pub fn new(q: u64) -> Result<Field> {
        // x^2 = c1 x + c0
        let (p, c1, c0) = match q {
            4 => (2usize, 1usize, 1usize),
            9 => (3, 0, 2),
            25 => (5, 0, 2),
            _ => return Err(Error::UnsupportedField(q)),
        };
        let q = q as usize;
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for x in 0..q {
            let (a, b) = (x % p, x / p);
            for y in 0..q {
                let (c, d) = (y % p, y / p);
                add[x * q + y] = (((a + c) % p) + p * ((b + d) % p)) as u8;
                // (a + b x)(c + d x) = ac + (ad + bc) x + bd x^2
                let bd = b * d;
                let lo = (a * c + bd * c0) % p;
                let hi = (a * d + b * c + bd * c1) % p;
                mul[x * q + y] = (lo + p * hi) as u8;
            }
        }
        Ok(Field { q, p, add, mul })
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn add(&self, x: u8, y: u8) -> u8 {
        self.add[x as usize * self.q + y as usize]
    }

    #[inline]
    pub fn mul(&self, x: u8, y: u8) -> u8 {
        self.mul[x as usize * self.q + y as usize]
    }

    pub fn neg(&self, x: u8) -> u8 {
        (0..self.q as u8).find(|&y| self.add(x, y) == 0).unwrap()
    }

    pub fn inv(&self, x: u8) -> Option<u8> {
        (1..self.q as u8).find(|&y| self.mul(x, y) == 1)
    }

    /// Base-`q` code of a vector.
    pub fn encode(&self, v: &[u8]) -> usize {
        v.iter().rev().fold(0, |acc, &x| acc * self.q + x as usize)
    }

    pub fn decode_into(&self, mut code: usize, out: &mut [u8]) {
        for x in out.iter_mut() {
            *x = (code % self.q) as u8;
            code /= self.q;
        }
    }

    /// `y = M v` for the `rows × cols` matrix `m` stored row-major.
    pub fn apply(&self, m: &[u8], rows: usize, cols: usize, v: &[u8], out: &mut [u8]) {
        for r in 0..rows {
            let mut acc = 0u8;
            for c in 0..cols {
                acc = self.add(acc, self.mul(m[r * cols + c], v[c]));
            }
            out[r] = acc;
        }
    }
}
