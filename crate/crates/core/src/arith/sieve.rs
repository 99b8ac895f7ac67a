//! Linear sieve over smallest prime factors and the tables derived from it.

/// Smallest-prime-factor table for `0..=limit` (entries 0 and 1 are 0).
pub(crate) fn smallest_prime_factors(limit: usize) -> Vec<u32> {
    assert!(
        limit < u32::MAX as usize,
        "limit too large for a u32 factor table"
    );
    let mut spf = vec![0u32; limit + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=limit {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let lowest = spf[i];
        for &p in &primes {
            let composite = i * p as usize;
            if p > lowest || composite > limit {
                break;
            }
            spf[composite] = p;
        }
    }
    spf
}

pub(crate) fn totient(limit: usize) -> Vec<i64> {
    let spf = smallest_prime_factors(limit);
    let mut phi = vec![0i64; limit + 1];
    if limit >= 1 {
        phi[1] = 1;
    }
    for n in 2..=limit {
        let p = spf[n] as usize;
        let rest = n / p;
        phi[n] = if rest.is_multiple_of(p) {
            phi[rest] * p as i64
        } else {
            phi[rest] * (p as i64 - 1)
        };
    }
    phi
}

pub(crate) fn mobius(limit: usize) -> Vec<i64> {
    let spf = smallest_prime_factors(limit);
    let mut mu = vec![0i64; limit + 1];
    if limit >= 1 {
        mu[1] = 1;
    }
    for n in 2..=limit {
        let p = spf[n] as usize;
        let rest = n / p;
        mu[n] = if rest.is_multiple_of(p) { 0 } else { -mu[rest] };
    }
    mu
}

/// Ω(n): prime factors counted with multiplicity.
pub(crate) fn big_omega(limit: usize) -> Vec<i64> {
    let spf = smallest_prime_factors(limit);
    let mut omega = vec![0i64; limit + 1];
    for n in 2..=limit {
        omega[n] = omega[n / spf[n] as usize] + 1;
    }
    omega
}

/// ω(n): distinct prime factors.
pub(crate) fn small_omega(limit: usize) -> Vec<i64> {
    let spf = smallest_prime_factors(limit);
    let mut omega = vec![0i64; limit + 1];
    for n in 2..=limit {
        let p = spf[n] as usize;
        let rest = n / p;
        omega[n] = if rest.is_multiple_of(p) {
            omega[rest]
        } else {
            omega[rest] + 1
        };
    }
    omega
}

pub(crate) fn divisor_count(limit: usize) -> Vec<i64> {
    let spf = smallest_prime_factors(limit);
    let mut d = vec![0i64; limit + 1];
    // exponent of spf(n) in n, and n with that prime power stripped
    let mut exponent = vec![0u8; limit + 1];
    let mut cofactor = vec![0u32; limit + 1];
    if limit >= 1 {
        d[1] = 1;
        cofactor[1] = 1;
    }
    for n in 2..=limit {
        let p = spf[n] as usize;
        let rest = n / p;
        if rest.is_multiple_of(p) {
            exponent[n] = exponent[rest] + 1;
            cofactor[n] = cofactor[rest];
        } else {
            exponent[n] = 1;
            cofactor[n] = rest as u32;
        }
        d[n] = d[cofactor[n] as usize] * (exponent[n] as i64 + 1);
    }
    d
}

/// π(n) by an Eratosthenes sieve followed by a prefix sum.
pub(crate) fn prime_pi(limit: usize) -> Vec<i64> {
    let mut composite = vec![false; limit + 1];
    let mut p = 2;
    while p * p <= limit {
        if !composite[p] {
            let mut k = p * p;
            while k <= limit {
                composite[k] = true;
                k += p;
            }
        }
        p += 1;
    }
    let mut pi = vec![0i64; limit + 1];
    let mut running = 0i64;
    for n in 2..=limit {
        if !composite[n] {
            running += 1;
        }
        pi[n] = running;
    }
    pi
}
