import java.util.Scanner;

public class Stats {
    static double mean(double[] values) {
        double sum = 0;
        for (double v : values) {
            sum += v;
        }
        return sum / values.length;
    }

    static double variance(double[] values) {
        double m = mean(values);
        double acc = 0;
        for (double v : values) {
            acc += (v - m) * (v - m);
        }
        return acc / values.length;
    }

    public static void main(String[] args) {
        Scanner in = new Scanner(System.in);
        int n = in.nextInt();
        double[] values = new double[n];
        for (int i = 0; i < n; i++) {
            values[i] = in.nextDouble();
        }
        System.out.printf("%.3f %.3f%n", mean(values), Math.sqrt(variance(values)));
    }
}
