static int bigger(int x, int y) { return x > y ? x : y; }

int max(int *a, int n) {
    if (n == 1)
        return a[0];
    return bigger(a[0], max(a + 1, n - 1));
}
