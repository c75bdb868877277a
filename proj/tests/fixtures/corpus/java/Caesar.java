import java.util.Scanner;

public class Caesar {
    static char shift(char ch, int k) {
        if (Character.isUpperCase(ch)) {
            return (char) ((ch - 'A' + k) % 26 + 'A');
        }
        if (Character.isLowerCase(ch)) {
            return (char) ((ch - 'a' + k) % 26 + 'a');
        }
        return ch;
    }

    public static void main(String[] args) {
        Scanner in = new Scanner(System.in);
        int k = Integer.parseInt(in.nextLine().trim());
        StringBuilder out = new StringBuilder();
        for (char ch : in.nextLine().toCharArray()) {
            out.append(shift(ch, k));
        }
        System.out.println(out);
    }
}
