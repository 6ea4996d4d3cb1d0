int count(int *a, int n, int v) {
    int c = 0;
    for (int i = 0; i < n; i++)
        if (a[i] == v)
            c++;
    return c;
}
