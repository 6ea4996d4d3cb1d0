int count(int *a, int n, int v) {
    int c = 0;
    int *end = a + n;
    while (a != end) {
        if (*a++ == v)
            c++;
    }
    return c;
}
