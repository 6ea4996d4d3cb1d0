unsigned count(unsigned *a, unsigned n, unsigned v) {
    unsigned c = 0;
    if (!n)
        return 0;
    do {
        c += a[--n] == v;
    } while (n);
    return c;
}
