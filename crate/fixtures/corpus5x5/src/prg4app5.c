unsigned gcd(unsigned a, unsigned b) {
    unsigned t;
    if (!b)
        return a;
    do {
        t = a % b;
        a = b;
        b = t;
    } while (b);
    return a;
}
