unsigned sum(unsigned *a, unsigned n) {
    unsigned s = 0;
    if (!n)
        return 0;
    do {
        s += a[--n];
    } while (n);
    return s;
}
