int count(int *a, int n, int v) {
    if (n == 0)
        return 0;
    return (a[0] == v) + count(a + 1, n - 1, v);
}
