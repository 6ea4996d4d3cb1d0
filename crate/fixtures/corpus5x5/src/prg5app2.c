int max(int *a, int n) {
    int m = a[0], i = 1;
loop:
    if (i >= n)
        goto done;
    m = a[i] > m ? a[i] : m;
    i = i + 1;
    goto loop;
done:
    return m;
}
