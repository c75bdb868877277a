import java.util.Arrays;
import java.util.Scanner;

public class Matrix {
    static long[][] multiply(long[][] a, long[][] b) {
        int n = a.length;
        long[][] result = new long[n][n];
        for (int i = 0; i < n; i++) {
            for (int j = 0; j < n; j++) {
                long acc = 0;
                for (int k = 0; k < n; k++) {
                    acc += a[i][k] * b[k][j];
                }
                result[i][j] = acc;
            }
        }
        return result;
    }

    public static void main(String[] args) {
        Scanner in = new Scanner(System.in);
        int n = in.nextInt();
        long[][] a = new long[n][n];
        for (int i = 0; i < n; i++) {
            for (int j = 0; j < n; j++) {
                a[i][j] = in.nextLong();
            }
        }
        for (long[] row : multiply(a, a)) {
            System.out.println(Arrays.toString(row));
        }
    }
}
